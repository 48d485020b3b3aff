#include "simspar/densify.hpp"

#include "simspar/log.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace simspar {
namespace {

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() { sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ (stream << 56)) + index);
}

void SparsifyOptions::validate() const {
  filter.validate();
  if (limits.max_iters < 0) throw ValidationError("max_iters must be >= 0");
  if (!(limits.max_density >= 1.0)) throw ValidationError("max_density must be >= 1");
  if (eigen.max_iters < 1) throw ValidationError("eigen max_iters must be >= 1");
  if (!(eigen.tol > 0.0)) throw ValidationError("eigen tol must be positive");
}

Sparsifier::Sparsifier(const Graph& g, SpanningTree tree)
    : g_(&g), tree_(std::move(tree)), mask_(g.num_edges(), 0) {
  if (tree_.num_vertices() != g.num_vertices()) throw DimensionError("tree does not match graph");
  for (EdgeId e : tree_.edge_ids()) mask_[e] = 1;
}

double Sparsifier::density() const {
  return g_->num_vertices() ? static_cast<double>(num_edges()) / static_cast<double>(g_->num_vertices()) : 0.0;
}

std::vector<EdgeId> Sparsifier::edge_ids() const {
  std::vector<EdgeId> out;
  out.reserve(num_edges());
  for (EdgeId e = 0; e < mask_.size(); ++e) {
    if (mask_[e]) out.push_back(e);
  }
  return out;
}

std::vector<Edge> Sparsifier::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (EdgeId e = 0; e < mask_.size(); ++e) {
    if (mask_[e]) out.push_back(g_->edge(e));
  }
  return out;
}

void Sparsifier::add_edge_ids(std::span<const EdgeId> edges) {
  for (EdgeId e : edges) {
    if (e >= mask_.size()) throw DimensionError("edge id out of range");
    if (mask_[e]) continue;
    mask_[e] = 1;
    recovered_.push_back(e);
    stale_ = true;
  }
}

void Sparsifier::add_edges(std::span<const EdgeHeat> edges) {
  std::vector<EdgeId> ids;
  ids.reserve(edges.size());
  for (const EdgeHeat& h : edges) ids.push_back(h.edge);
  add_edge_ids(ids);
}

void Sparsifier::refresh() {
  Stopwatch sw(timings_.factorize);
  p_ = g_->subgraph(mask_);
  if (recovered_.empty()) {
    solver_ = std::make_unique<TreeSolver>(tree_);
  } else {
    solver_ = factorize(p_, tree_.root());
  }
  stale_ = false;
  estimated_ = false;
}

const SimilarityReport& Sparsifier::estimate(const EigenEstimateOptions& opts) {
  if (stale_) refresh();
  if (!estimated_) {
    Stopwatch sw(timings_.eigest);
    report_ = similarity_report(*g_, p_, *solver_, opts);
    trace_.push_back({steps_, num_edges(), recovered_.size(), report_.lambda_max, report_.lambda_min,
                      report_.sigma2});
    estimated_ = true;
  }
  return report_;
}

std::vector<EdgeHeat> select_recovery_edges(std::span<const EdgeHeat> heats, const Graph& g,
                                            const SpanningTree& tree, double theta, std::size_t cap,
                                            double overlap, StepStats* stats) {
  std::vector<EdgeHeat> selected = filter_edges(heats, theta, cap);
  std::vector<EdgeHeat> kept = dedup_similar(selected, g, tree, overlap);
  bool fallback = false;
  if (kept.empty() && !heats.empty() && cap > 0) {
    kept.push_back(heats.front());
    fallback = true;
  }
  if (stats) {
    stats->selected = selected.size();
    stats->deduped = selected.size() - (fallback ? 0 : kept.size());
    stats->added = kept.size();
    stats->fallback = fallback;
  }
  return kept;
}

StepStats densify_step(Sparsifier& sp, const Graph& g, const SparsifyOptions& opts) {
  if (&sp.source() != &g) throw ValidationError("densify_step: sparsifier belongs to a different graph");
  StepStats stats;
  EigenEstimateOptions eig = opts.eigen;
  eig.seed = derive_seed(opts.seed, 1, static_cast<std::uint64_t>(sp.steps_));
  const SimilarityReport& rep = sp.estimate(eig);
  if (rep.sigma2 <= opts.filter.target_sigma2 || sp.num_edges() == g.num_edges()) {
    stats.converged = true;
    return stats;
  }

  const std::size_t n = g.num_vertices();
  const auto limit = static_cast<std::size_t>(std::floor(opts.limits.max_density * static_cast<double>(n)));
  const std::size_t room = limit > sp.num_edges() ? limit - sp.num_edges() : 0;
  const std::size_t cap = std::min(opts.filter.edge_cap(n), room);

  stats.theta = heat_threshold(opts.filter.target_sigma2, rep.lambda_min, rep.lambda_max, opts.filter.t);
  stats.edge_budget = estimate_edge_budget(rep.lambda_max, opts.filter.target_sigma2 * rep.lambda_min);

  std::vector<EdgeHeat> heats;
  {
    Stopwatch sw(sp.timings_.embed);
    const std::size_t r = opts.num_probes ? opts.num_probes : default_probe_count(n);
    const auto probes = make_probes(n, r, derive_seed(opts.seed, 2, static_cast<std::uint64_t>(sp.steps_)));
    const LaplacianOperator LG(g);
    const auto iterated = iterate_probes(LG, sp.solver(), probes, opts.filter.t);
    heats = edge_joule_heat(g, sp.edge_mask(), iterated);
  }
  stats.considered = heats.size();

  std::vector<EdgeHeat> chosen;
  {
    Stopwatch sw(sp.timings_.filter);
    chosen = select_recovery_edges(heats, g, sp.tree(), stats.theta, cap, opts.filter.dedup_overlap, &stats);
  }
  sp.add_edges(chosen);
  ++sp.steps_;
  log_debug("densify step " + std::to_string(sp.steps_) + ": sigma2 " + std::to_string(rep.sigma2) + ", theta " +
            std::to_string(stats.theta) + ", added " + std::to_string(stats.added));
  return stats;
}

SparsifyResult sparsify(const Graph& g, const SparsifyOptions& opts) {
  opts.validate();
  if (g.num_vertices() < 2) throw DegenerateInputError("sparsify: need at least two vertices");
  if (!is_connected(g)) {
    throw DisconnectedGraphError("sparsify: graph is disconnected; reduce it with largest_component first");
  }
  PhaseTimings timings;
  SpanningTree tree;
  {
    Stopwatch sw(timings.tree);
    tree = extract_spanning_tree(g, opts.tree);
  }
  SparsifyResult res{Sparsifier(g, std::move(tree)), {}, false, 0, {}};
  Sparsifier& sp = res.sparsifier;
  sp.timings().tree = timings.tree;

  while (sp.steps() < opts.limits.max_iters) {
    StepStats stats = densify_step(sp, g, opts);
    res.step_stats.push_back(stats);
    if (stats.converged || stats.added == 0) break;
  }
  EigenEstimateOptions eig = opts.eigen;
  eig.seed = derive_seed(opts.seed, 1, static_cast<std::uint64_t>(sp.steps()));
  res.report = sp.estimate(eig);
  res.steps = sp.steps();
  res.converged = res.report.sigma2 <= opts.filter.target_sigma2 || sp.num_edges() == g.num_edges();
  return res;
}

}  // namespace simspar
