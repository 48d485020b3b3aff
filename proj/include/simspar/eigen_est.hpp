#pragma once

#include "simspar/graph.hpp"
#include "simspar/solver.hpp"

#include <cstdint>
#include <vector>

namespace simspar {

struct SimilarityReport {
  double lambda_max = 1.0;
  double lambda_min = 1.0;
  double sigma2 = 1.0;  // lambda_max / lambda_min
  int iterations = 0;   // power iterations spent on lambda_max
  bool converged = false;
};

struct LambdaMaxEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // Rayleigh quotient after each iteration
};

struct EigenEstimateOptions {
  int max_iters = 10;
  double tol = 1e-3;
  std::uint64_t seed = 42;
};

/// Power iteration on L_P^+ L_G from a random mean-zero start, estimating
/// lambda_max by the Rayleigh quotient h^T L_G h / h^T L_P h. Stops once the
/// relative change drops below tol or after max_iters. A start that lands in
/// the kernel is re-drawn up to three times before DegenerateProbeError.
LambdaMaxEstimate estimate_lambda_max(const LaplacianOperator& LG, const LaplacianOperator& LP,
                                      const LaplacianSolver& P, const EigenEstimateOptions& opts = {});

/// Minimum weighted-degree ratio L_G(p,p) / L_P(p,p): an upper bound on
/// lambda_min. Clamped below at 1 when P is known to be a subgraph of G.
/// Throws ValidationError if some vertex is isolated in P.
double estimate_lambda_min(const LaplacianOperator& LG, const LaplacianOperator& LP, bool subgraph = true);

SimilarityReport similarity_report(const Graph& g, const Graph& p, const LaplacianSolver& P,
                                   const EigenEstimateOptions& opts = {}, bool subgraph = true);

}  // namespace simspar
