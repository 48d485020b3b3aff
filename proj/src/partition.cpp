#include "simspar/partition.hpp"

#include "simspar/embed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace simspar {
namespace {

// Removes the component along 1 in the D inner product (plain mean when D = I).
void deflate(Vector& x, const Vector* degrees) {
  if (!degrees) {
    remove_mean(x);
    return;
  }
  x.array() -= degrees->dot(x) / degrees->sum();
}

double scaled_norm(const Vector& x, const Vector* degrees) {
  return degrees ? std::sqrt((x.array().square() * degrees->array()).sum()) : x.norm();
}

}  // namespace

FiedlerResult fiedler_vector(const Graph& g, const LaplacianSolver& pre, const FiedlerOptions& opts) {
  if (opts.iters < 1) throw ValidationError("fiedler_vector: iters must be >= 1");
  const std::size_t n = g.num_vertices();
  if (pre.size() != n) throw DimensionError("fiedler_vector: preconditioner size mismatch");
  if (!is_connected(g)) throw DisconnectedGraphError("fiedler_vector: graph is disconnected");

  Vector degrees;
  if (opts.normalized) {
    degrees.resize(static_cast<Eigen::Index>(n));
    for (VertexId v = 0; v < n; ++v) degrees[v] = g.weighted_degree(v);
  }
  const Vector* dptr = opts.normalized ? &degrees : nullptr;

  const LaplacianOperator L(g);
  FiedlerResult res;
  Vector x = make_start_vector(n, opts.seed).values();
  deflate(x, dptr);
  x /= scaled_norm(x, dptr);
  for (int k = 1; k <= opts.iters; ++k) {
    Vector rhs = opts.normalized ? Vector(degrees.cwiseProduct(x)) : x;
    PcgResult solve = pcg_solve(L, pre, rhs, opts.inner_tol, opts.inner_max_iters);
    res.inner_iterations += solve.iterations;
    if (!solve.converged) {
      throw SolverError("fiedler_vector: PCG did not converge in inverse power iteration " + std::to_string(k) +
                        " (relative residual " + std::to_string(solve.relative_residual) + ")");
    }
    x = std::move(solve.x);
    deflate(x, dptr);
    const double norm = scaled_norm(x, dptr);
    if (!(norm > 0.0)) throw SolverError("fiedler_vector: iterate vanished");
    x /= norm;
    res.iterations = k;
  }
  res.vector = std::move(x);
  return res;
}

PartitionResult sign_cut(const Graph& g, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != g.num_vertices()) throw DimensionError("sign_cut: dimension mismatch");
  PartitionResult res;
  res.side.resize(g.num_vertices());
  for (VertexId i = 0; i < g.num_vertices(); ++i) {
    res.side[i] = v[i] >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
    (res.side[i] > 0 ? res.positive : res.negative) += 1;
  }
  if (res.positive == 0 || res.negative == 0) {
    throw DegeneratePartitionError("sign_cut: every vertex has the same sign; iterate further");
  }
  res.balance_ratio = static_cast<double>(res.positive) / static_cast<double>(res.negative);
  for (const Edge& e : g.edges()) {
    if (res.side[e.p] != res.side[e.q]) res.cut_weight += e.w;
  }
  return res;
}

double sign_disagreement(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
  if (a.size() != b.size()) throw DimensionError("sign_disagreement: size mismatch");
  if (a.empty()) return 0.0;
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i] ? 1 : 0;
  const std::size_t best = std::min(differ, a.size() - differ);
  return static_cast<double>(best) / static_cast<double>(a.size());
}

}  // namespace simspar
