#pragma once

#include "simspar/graph.hpp"
#include "simspar/spanning_tree.hpp"

#include <memory>

namespace simspar {

/// Solves L_P x = b on the range of a connected Laplacian: b is projected to
/// mean zero on entry and x is returned mean-zero. Implementations are
/// immutable after construction and safe for concurrent solve() calls.
class LaplacianSolver {
 public:
  virtual ~LaplacianSolver() = default;
  virtual std::size_t size() const = 0;
  virtual Vector solve(const Vector& b) const = 0;
};

/// Exact O(n) solver for a tree Laplacian.
class TreeSolver final : public LaplacianSolver {
 public:
  explicit TreeSolver(const SpanningTree& t);

  std::size_t size() const override { return order_.size(); }
  Vector solve(const Vector& b) const override;

 private:
  std::vector<VertexId> order_;
  std::vector<VertexId> parent_;
  std::vector<double> parent_w_;
};

/// Sparse LDL^T of the Laplacian grounded at one vertex, AMD ordering.
class CholeskySolver final : public LaplacianSolver {
 public:
  /// Throws DisconnectedGraphError if g is disconnected and SolverError on a
  /// pivot below 1e-14 * max weighted degree.
  CholeskySolver(const Graph& g, VertexId ground);
  ~CholeskySolver() override;

  CholeskySolver(const CholeskySolver&) = delete;
  CholeskySolver& operator=(const CholeskySolver&) = delete;

  std::size_t size() const override { return n_; }
  Vector solve(const Vector& b) const override;

  VertexId ground() const { return ground_; }
  /// Nonzeros in the factor (fill diagnostic).
  std::size_t factor_nonzeros() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n_;
  VertexId ground_;
};

/// Exact tree solve. b is mean-subtracted, with a warning, when
/// |sum(b)| > 1e-9 * ||b||_1.
Vector tree_solve(const SpanningTree& t, const Vector& b);

std::unique_ptr<LaplacianSolver> factorize(const Graph& p, VertexId ground);

struct PcgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;  // ||L x - b|| / ||b||, recomputed at exit
  bool converged = false;
};

/// Preconditioned CG on the mean-zero subspace, stopping when
/// ||L x - b||_2 < tol * ||b||_2.
PcgResult pcg_solve(const LaplacianOperator& A, const LaplacianSolver& pre, const Vector& b,
                    double tol = 1e-3, int max_iters = 1000);

}  // namespace simspar
