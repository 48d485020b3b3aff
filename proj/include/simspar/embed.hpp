#pragma once

#include "simspar/graph.hpp"
#include "simspar/solver.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace simspar {

/// Mean-zero, nonzero start vector for generalized power iterations.
class ProbeVector {
 public:
  /// Subtracts the mean; throws DegenerateProbeError if nothing is left
  /// (constant input).
  static ProbeVector from_values(Vector values, std::uint64_t seed = 0, std::size_t index = 0);

  const Vector& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  std::uint64_t seed() const { return seed_; }
  std::size_t index() const { return index_; }

 private:
  ProbeVector(Vector v, std::uint64_t seed, std::size_t index)
      : values_(std::move(v)), seed_(seed), index_(index) {}

  Vector values_;
  std::uint64_t seed_;
  std::size_t index_;
};

/// ceil(log2 n), clamped to [4, 32].
std::size_t default_probe_count(std::size_t n);

/// r mean-subtracted Rademacher vectors, bit-identical for a given seed.
std::vector<ProbeVector> make_probes(std::size_t n, std::size_t r, std::uint64_t seed);

/// Mean-subtracted vector with i.i.d. uniform [-1, 1) entries. Continuous
/// entries avoid the exact eigenvector hits a +-1 start can have on tiny graphs.
ProbeVector make_start_vector(std::size_t n, std::uint64_t seed);

/// h_t = (L_P^+ L_G)^t h0 with mean subtraction after every solve. Throws
/// DegenerateProbeError when the iterate underflows.
Vector generalized_power_iterate(const LaplacianOperator& LG, const LaplacianSolver& P, const ProbeVector& h0,
                                 int t);

struct EdgeHeat {
  EdgeId edge;
  double heat;        // sum over probes of w (h(p) - h(q))^2
  double normalized;  // heat / max heat
  std::size_t rank;   // 0 = hottest
};

/// One record per edge of g with in_sparsifier[e] == 0, sorted by heat
/// descending, ties by edge id ascending.
std::vector<EdgeHeat> edge_joule_heat(const Graph& g, std::span<const char> in_sparsifier,
                                      std::span<const Vector> probes_t);

/// Runs the power iterations for all probes (in parallel where available)
/// and returns the iterated vectors in probe order.
std::vector<Vector> iterate_probes(const LaplacianOperator& LG, const LaplacianSolver& P,
                                   std::span<const ProbeVector> probes, int t);

}  // namespace simspar
