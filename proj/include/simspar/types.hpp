#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace simspar {

using Vector = Eigen::VectorXd;
using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when not attributable to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraphError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class DegenerateProbeError : public Error {
 public:
  using Error::Error;
};

class DegeneratePartitionError : public Error {
 public:
  using Error::Error;
};

// Subtracts the arithmetic mean in place.
inline void remove_mean(Vector& x) {
  if (x.size() > 0) x.array() -= x.mean();
}

}  // namespace simspar
