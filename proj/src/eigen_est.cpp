#include "simspar/eigen_est.hpp"

#include "simspar/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace simspar {
namespace {

constexpr int kReseeds = 3;

bool try_power_iteration(const LaplacianOperator& LG, const LaplacianOperator& LP, const LaplacianSolver& P,
                         const EigenEstimateOptions& opts, std::uint64_t seed, LambdaMaxEstimate& est) {
  est = {};
  Vector h = make_start_vector(LG.size(), seed).values();
  Vector y;
  for (int k = 1; k <= opts.max_iters; ++k) {
    LG.apply(h, y);
    h = P.solve(y);
    remove_mean(h);
    const double norm = h.norm();
    if (!(norm > 1e-200) || !std::isfinite(norm)) return false;
    h /= norm;
    const double num = quadratic_form(LG, h);
    const double den = quadratic_form(LP, h);
    if (!(den > 0.0)) return false;
    const double rq = num / den;
    est.history.push_back(rq);
    est.value = rq;
    est.iterations = k;
    if (k > 1) {
      const double prev = est.history[est.history.size() - 2];
      if (std::abs(rq - prev) < opts.tol * std::abs(rq)) {
        est.converged = true;
        break;
      }
    }
  }
  return true;
}

}  // namespace

LambdaMaxEstimate estimate_lambda_max(const LaplacianOperator& LG, const LaplacianOperator& LP,
                                      const LaplacianSolver& P, const EigenEstimateOptions& opts) {
  if (opts.max_iters < 1) throw ValidationError("estimate_lambda_max: max_iters must be >= 1");
  if (!(opts.tol > 0.0)) throw ValidationError("estimate_lambda_max: tol must be positive");
  if (LG.size() != LP.size() || P.size() != LG.size()) throw DimensionError("estimate_lambda_max: dimension mismatch");
  LambdaMaxEstimate est;
  for (int attempt = 0; attempt <= kReseeds; ++attempt) {
    // Distinct, deterministic seeds per attempt.
    const std::uint64_t seed = opts.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt);
    if (try_power_iteration(LG, LP, P, opts, seed, est)) return est;
  }
  throw DegenerateProbeError("estimate_lambda_max: degenerate start vector after " + std::to_string(kReseeds) +
                             " re-seeds");
}

double estimate_lambda_min(const LaplacianOperator& LG, const LaplacianOperator& LP, bool subgraph) {
  if (LG.size() != LP.size()) throw DimensionError("estimate_lambda_min: dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (VertexId p = 0; p < LG.size(); ++p) {
    const double dp = LP.diagonal(p);
    if (!(dp > 0.0)) {
      throw ValidationError("estimate_lambda_min: vertex " + std::to_string(p) + " is isolated in P (P not spanning)");
    }
    best = std::min(best, LG.diagonal(p) / dp);
  }
  return subgraph ? std::max(1.0, best) : best;
}

SimilarityReport similarity_report(const Graph& g, const Graph& p, const LaplacianSolver& P,
                                   const EigenEstimateOptions& opts, bool subgraph) {
  const LaplacianOperator LG(g), LP(p);
  const double lmin = estimate_lambda_min(LG, LP, subgraph);
  const LambdaMaxEstimate lmax = estimate_lambda_max(LG, LP, P, opts);
  SimilarityReport rep;
  rep.lambda_min = lmin;
  // Any single degree ratio is itself a Rayleigh quotient, so lambda_min's
  // estimate is also a valid lower bound for lambda_max.
  rep.lambda_max = std::max(lmax.value, lmin);
  rep.sigma2 = rep.lambda_max / rep.lambda_min;
  rep.iterations = lmax.iterations;
  rep.converged = lmax.converged;
  return rep;
}

}  // namespace simspar
