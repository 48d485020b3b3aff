#include "simspar/solver.hpp"

#include "simspar/log.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <string>

namespace simspar {
namespace {

Vector projected_rhs(const Vector& b, const char* who) {
  Vector r = b;
  const double sum = b.sum();
  if (std::abs(sum) > 1e-9 * b.lpNorm<1>()) {
    log_warning(std::string(who) + ": right-hand side is not mean-zero (sum " + std::to_string(sum) +
                "); projecting");
  }
  remove_mean(r);
  return r;
}

}  // namespace

TreeSolver::TreeSolver(const SpanningTree& t) : order_(t.order()), parent_(t.num_vertices()), parent_w_(t.num_vertices()) {
  for (VertexId v = 0; v < t.num_vertices(); ++v) {
    parent_[v] = t.parent(v);
    parent_w_[v] = t.parent_weight(v);
  }
}

Vector TreeSolver::solve(const Vector& b) const {
  const std::size_t n = order_.size();
  if (static_cast<std::size_t>(b.size()) != n) throw DimensionError("tree solve: dimension mismatch");
  Vector flow = projected_rhs(b, "tree_solve");
  // Leaf-to-root: flow[v] becomes the current through the edge (v, parent).
  for (std::size_t i = n; i-- > 1;) {
    const VertexId v = order_[i];
    flow[parent_[v]] += flow[v];
  }
  Vector x(static_cast<Eigen::Index>(n));
  x[order_[0]] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const VertexId v = order_[i];
    x[v] = x[parent_[v]] + flow[v] / parent_w_[v];
  }
  remove_mean(x);
  return x;
}

Vector tree_solve(const SpanningTree& t, const Vector& b) { return TreeSolver(t).solve(b); }

struct CholeskySolver::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

CholeskySolver::CholeskySolver(const Graph& g, VertexId ground)
    : impl_(std::make_unique<Impl>()), n_(g.num_vertices()), ground_(ground) {
  if (n_ == 0) throw DegenerateInputError("factorize: empty graph");
  if (ground >= n_) throw DimensionError("factorize: ground vertex out of range");
  if (!is_connected(g)) throw DisconnectedGraphError("factorize: sparsifier graph is disconnected");
  if (n_ == 1) return;
  impl_->ldlt.compute(grounded_laplacian(g, ground));
  const double floor = 1e-14 * g.max_weighted_degree();
  if (impl_->ldlt.info() != Eigen::Success) {
    throw SolverError("factorize: numerical failure in LDL^T");
  }
  const auto& d = impl_->ldlt.vectorD();
  const auto& perm = impl_->ldlt.permutationP().indices();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > floor)) {
      // Map the pivot back through the ordering and the grounding shift.
      Eigen::Index reduced = 0;
      for (Eigen::Index k = 0; k < perm.size(); ++k) {
        if (perm[k] == i) reduced = k;
      }
      const auto v = static_cast<VertexId>(reduced < ground ? reduced : reduced + 1);
      throw SolverError("factorize: singular pivot at vertex " + std::to_string(v));
    }
  }
}

CholeskySolver::~CholeskySolver() = default;

std::size_t CholeskySolver::factor_nonzeros() const {
  return n_ > 1 ? static_cast<std::size_t>(impl_->ldlt.matrixL().nestedExpression().nonZeros()) : 0;
}

Vector CholeskySolver::solve(const Vector& b) const {
  if (static_cast<std::size_t>(b.size()) != n_) throw DimensionError("solve: dimension mismatch");
  Vector x = Vector::Zero(static_cast<Eigen::Index>(n_));
  if (n_ == 1) return x;
  const Vector r = projected_rhs(b, "solve");
  const auto g = static_cast<Eigen::Index>(ground_);
  const auto m = static_cast<Eigen::Index>(n_ - 1);
  Vector reduced(m);
  reduced.head(g) = r.head(g);
  reduced.tail(m - g) = r.tail(m - g);
  Vector y = impl_->ldlt.solve(reduced);
  x.head(g) = y.head(g);
  x.tail(m - g) = y.tail(m - g);
  remove_mean(x);
  return x;
}

std::unique_ptr<LaplacianSolver> factorize(const Graph& p, VertexId ground) {
  return std::make_unique<CholeskySolver>(p, ground);
}

PcgResult pcg_solve(const LaplacianOperator& A, const LaplacianSolver& pre, const Vector& b_in, double tol,
                    int max_iters) {
  const auto n = static_cast<Eigen::Index>(A.size());
  if (b_in.size() != n || pre.size() != A.size()) throw DimensionError("pcg_solve: dimension mismatch");
  PcgResult res;
  const Vector b = projected_rhs(b_in, "pcg_solve");
  res.x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  Vector r = b, Ap(n);
  Vector z = pre.solve(r);
  Vector p = z;
  double rz = r.dot(z);
  while (res.iterations < max_iters) {
    A.apply(p, Ap);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break;
    const double alpha = rz / pAp;
    res.x += alpha * p;
    r -= alpha * Ap;
    ++res.iterations;
    if (r.norm() < tol * bnorm) {
      // Confirm against the true residual before declaring convergence.
      A.apply(res.x, Ap);
      r = b - Ap;
      if (r.norm() < tol * bnorm) break;
    }
    z = pre.solve(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  remove_mean(res.x);
  A.apply(res.x, Ap);
  res.relative_residual = (b - Ap).norm() / bnorm;
  res.converged = res.relative_residual < tol;
  return res;
}

}  // namespace simspar
