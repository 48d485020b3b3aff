#pragma once

#include "simspar/edge_filter.hpp"
#include "simspar/eigen_est.hpp"
#include "simspar/embed.hpp"
#include "simspar/solver.hpp"
#include "simspar/spanning_tree.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace simspar {

struct DensifyLimits {
  int max_iters = 50;         // edge-adding steps
  double max_density = 4.0;   // |E_s| / |V|
};

struct SparsifyOptions {
  FilterConfig filter;
  DensifyLimits limits;
  TreeStrategy tree = TreeStrategy::max_weight;
  std::uint64_t seed = 42;
  std::size_t num_probes = 0;  // 0: default_probe_count(n)
  EigenEstimateOptions eigen;  // seed is derived per iteration from `seed`

  void validate() const;
};

struct PhaseTimings {
  double tree = 0.0;
  double factorize = 0.0;
  double eigest = 0.0;
  double embed = 0.0;
  double filter = 0.0;

  double total() const { return tree + factorize + eigest + embed + filter; }
};

struct IterationRecord {
  int iteration = 0;
  std::size_t edges = 0;      // |E_s| when the estimate was taken
  std::size_t recovered = 0;  // off-tree edges in the sparsifier
  double lambda_max = 1.0;
  double lambda_min = 1.0;
  double sigma2 = 1.0;
};

struct StepStats {
  bool converged = false;     // the step found sigma2 <= target and added nothing
  double theta = 1.0;
  std::int64_t edge_budget = 0;
  std::size_t considered = 0;  // off-tree edges ranked
  std::size_t selected = 0;    // passed the heat threshold (after the cap)
  std::size_t deduped = 0;     // dropped as similar
  std::size_t added = 0;
  bool fallback = false;       // hottest edge added because nothing survived
};

/// P = tree + recovered off-tree edges, all with the source weights.
/// Holds a pointer to the source graph, which must outlive it.
class Sparsifier {
 public:
  Sparsifier(const Graph& g, SpanningTree tree);

  const Graph& source() const { return *g_; }
  const SpanningTree& tree() const { return tree_; }
  const std::vector<EdgeId>& recovered() const { return recovered_; }
  std::span<const char> edge_mask() const { return mask_; }
  bool contains(EdgeId e) const { return mask_[e] != 0; }

  std::size_t num_edges() const { return tree_.edge_ids().size() + recovered_.size(); }
  double density() const;
  /// Edge ids of P, ascending.
  std::vector<EdgeId> edge_ids() const;
  std::vector<Edge> edges() const;

  /// Adds off-tree edges (ignores ones already present) and marks the solver stale.
  void add_edges(std::span<const EdgeHeat> edges);
  void add_edge_ids(std::span<const EdgeId> edges);

  bool stale() const { return stale_; }
  /// Rebuilds the subgraph Laplacian and its solver: the exact tree solver
  /// while P is a tree, a grounded Cholesky factorization afterwards.
  void refresh();

  /// Current subgraph and solver; call refresh() first when stale().
  const Graph& graph() const { return p_; }
  const LaplacianSolver& solver() const { return *solver_; }

  /// Latest similarity estimate and the per-refresh trace.
  const SimilarityReport& report() const { return report_; }
  const std::vector<IterationRecord>& trace() const { return trace_; }
  PhaseTimings& timings() { return timings_; }
  const PhaseTimings& timings() const { return timings_; }
  int steps() const { return steps_; }

  /// Refreshes if stale and updates report() and trace().
  const SimilarityReport& estimate(const EigenEstimateOptions& opts);

 private:
  friend StepStats densify_step(Sparsifier&, const Graph&, const SparsifyOptions&);

  const Graph* g_;
  SpanningTree tree_;
  std::vector<char> mask_;
  std::vector<EdgeId> recovered_;
  Graph p_;
  std::unique_ptr<LaplacianSolver> solver_;
  bool stale_ = true;
  bool estimated_ = false;
  SimilarityReport report_;
  std::vector<IterationRecord> trace_;
  PhaseTimings timings_;
  int steps_ = 0;
};

/// Selection used by a densification step: threshold, cap, dedup, and the
/// hottest-edge fallback when nothing survives.
std::vector<EdgeHeat> select_recovery_edges(std::span<const EdgeHeat> heats, const Graph& g,
                                            const SpanningTree& tree, double theta, std::size_t cap,
                                            double overlap, StepStats* stats = nullptr);

/// One densification iteration: estimate similarity, stop if within target,
/// otherwise embed, filter and add edges.
StepStats densify_step(Sparsifier& sp, const Graph& g, const SparsifyOptions& opts);

struct SparsifyResult {
  Sparsifier sparsifier;
  SimilarityReport report;
  bool converged = false;
  int steps = 0;
  std::vector<StepStats> step_stats;
};

/// Grows a sparsifier from a spanning tree until the estimated sigma^2 is
/// within target or the limits are hit (converged = false then; not an error).
SparsifyResult sparsify(const Graph& g, const SparsifyOptions& opts);

/// Deterministic per-purpose seed derivation (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace simspar
