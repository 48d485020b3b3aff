#include "simspar/edge_filter.hpp"

#include <algorithm>
#include <cmath>

namespace simspar {

void FilterConfig::validate() const {
  if (!(target_sigma2 >= 1.0) || !std::isfinite(target_sigma2)) {
    throw ValidationError("target sigma^2 must be a finite value >= 1");
  }
  if (t < 1) throw ValidationError("t must be >= 1");
  if (!(dedup_overlap >= 0.0 && dedup_overlap <= 1.0)) throw ValidationError("dedup overlap must lie in [0, 1]");
}

std::size_t FilterConfig::edge_cap(std::size_t n) const {
  return max_edges_per_iter ? max_edges_per_iter : std::max<std::size_t>(n / 100, 32);
}

double heat_threshold(double sigma2, double lambda_min, double lambda_max, int t) {
  const double base = sigma2 * lambda_min / lambda_max;
  if (base >= 1.0) return 1.0;
  return std::pow(base, 2 * t + 1);
}

std::int64_t estimate_edge_budget(double lambda_max, double lambda_max_target) {
  const double k = std::ceil(2.0 * lambda_max / lambda_max_target - 1.0);
  return k > 0.0 ? static_cast<std::int64_t>(k) : 0;
}

std::vector<EdgeHeat> filter_edges(std::span<const EdgeHeat> heats, double theta, std::size_t cap) {
  std::vector<EdgeHeat> out;
  for (const EdgeHeat& h : heats) {
    if (out.size() >= cap || !(h.normalized >= theta)) break;
    out.push_back(h);
  }
  return out;
}

std::vector<EdgeHeat> dedup_similar(std::span<const EdgeHeat> selected, const Graph& g, const SpanningTree& tree,
                                    double overlap) {
  std::vector<EdgeHeat> kept;
  std::vector<char> covered(tree.num_vertices(), 0);  // indexed by child vertex of a tree edge
  std::vector<VertexId> path;
  for (const EdgeHeat& h : selected) {
    const Edge& e = g.edge(h.edge);
    tree.path_edges(e.p, e.q, path);
    std::size_t shared = 0;
    for (VertexId c : path) shared += covered[c] ? 1 : 0;
    if (!path.empty() && static_cast<double>(shared) > overlap * static_cast<double>(path.size())) continue;
    for (VertexId c : path) covered[c] = 1;
    kept.push_back(h);
  }
  return kept;
}

}  // namespace simspar
