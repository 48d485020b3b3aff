#pragma once

#include "simspar/graph.hpp"
#include "simspar/solver.hpp"

#include <cstdint>
#include <vector>

namespace simspar {

struct FiedlerOptions {
  int iters = 3;              // inverse power iterations
  double inner_tol = 1e-3;    // PCG relative residual per solve
  int inner_max_iters = 2000;
  std::uint64_t seed = 42;    // start vector
  bool normalized = false;    // use L x = lambda D x instead of L x = lambda x
};

struct FiedlerResult {
  Vector vector;  // mean-zero (D-orthogonal to 1 when normalized), unit norm
  int iterations = 0;
  int inner_iterations = 0;  // PCG iterations summed over all solves
};

/// Approximate Fiedler vector by inverse power iteration on L_G, each solve
/// done by PCG preconditioned with `pre`. Throws SolverError (naming the
/// outer iteration) if an inner solve fails to converge.
FiedlerResult fiedler_vector(const Graph& g, const LaplacianSolver& pre, const FiedlerOptions& opts = {});

struct PartitionResult {
  std::vector<std::int8_t> side;  // +1 or -1 per vertex
  std::size_t positive = 0;
  std::size_t negative = 0;
  double balance_ratio = 0.0;     // |V+| / |V-|
  double cut_weight = 0.0;        // total weight of edges of g crossing sides
  int iterations = 0;
};

/// Vertex i goes to sign(v(i)); zeros go to the positive side. Throws
/// DegeneratePartitionError if all vertices land on one side.
PartitionResult sign_cut(const Graph& g, const Vector& v);

/// Fraction of vertices whose sides differ, minimised over the global sign
/// flip of one side assignment.
double sign_disagreement(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b);

}  // namespace simspar
