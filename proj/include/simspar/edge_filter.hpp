#pragma once

#include "simspar/embed.hpp"
#include "simspar/spanning_tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace simspar {

struct FilterConfig {
  double target_sigma2 = 100.0;
  int t = 2;
  std::size_t max_edges_per_iter = 0;  // 0: max(n/100, 32)
  double dedup_overlap = 0.75;

  /// Throws ValidationError unless target_sigma2 >= 1, t >= 1 and
  /// dedup_overlap in [0, 1].
  void validate() const;
  std::size_t edge_cap(std::size_t n) const;
};

/// min(1, (sigma2 * lambda_min / lambda_max)^(2t+1)).
double heat_threshold(double sigma2, double lambda_min, double lambda_max, int t);

/// ceil(2 lambda_max / lambda_max_target - 1), floored at 0. Diagnostic only.
std::int64_t estimate_edge_budget(double lambda_max, double lambda_max_target);

/// Leading records with normalized >= theta, at most cap of them. Expects
/// heats sorted by heat descending.
std::vector<EdgeHeat> filter_edges(std::span<const EdgeHeat> heats, double theta, std::size_t cap);

/// Greedy scan in heat order: an edge is dropped when more than
/// `overlap` of its tree path (by edge count) is already covered by the
/// tree paths of edges accepted earlier in the batch.
std::vector<EdgeHeat> dedup_similar(std::span<const EdgeHeat> selected, const Graph& g, const SpanningTree& tree,
                                    double overlap);

}  // namespace simspar
