#include "simspar/report_json.hpp"

#include <ostream>

namespace simspar {

using nlohmann::json;

json to_json(const SimilarityReport& r) {
  return {{"lambda_max", r.lambda_max},
          {"lambda_min", r.lambda_min},
          {"sigma2", r.sigma2},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

json to_json(const IterationRecord& r) {
  return {{"iteration", r.iteration}, {"edges", r.edges},           {"recovered", r.recovered},
          {"lambda_max", r.lambda_max}, {"lambda_min", r.lambda_min}, {"sigma2", r.sigma2}};
}

json to_json(const StepStats& s) {
  return {{"converged", s.converged}, {"theta", s.theta},       {"edge_budget", s.edge_budget},
          {"considered", s.considered}, {"selected", s.selected}, {"deduped", s.deduped},
          {"added", s.added},           {"fallback", s.fallback}};
}

json to_json(const PhaseTimings& t) {
  return {{"tree", t.tree},   {"factorize", t.factorize}, {"eigest", t.eigest},
          {"embed", t.embed}, {"filter", t.filter},       {"total", t.total()}};
}

json sparsify_report(const Graph& g, const SparsifyResult& res, const SparsifyOptions& opts) {
  const Sparsifier& sp = res.sparsifier;
  json trace = json::array();
  for (const IterationRecord& r : sp.trace()) trace.push_back(to_json(r));
  json steps = json::array();
  for (const StepStats& s : res.step_stats) steps.push_back(to_json(s));
  return {
      {"target_sigma2", opts.filter.target_sigma2},
      {"t", opts.filter.t},
      {"seed", opts.seed},
      {"tree_strategy", opts.tree == TreeStrategy::max_weight ? "max_weight" : "low_stretch"},
      {"vertices", g.num_vertices()},
      {"edges", g.num_edges()},
      {"sparsifier_edges", sp.num_edges()},
      {"recovered_edges", sp.recovered().size()},
      {"density", sp.density()},
      {"tree_total_stretch", total_stretch(sp.tree(), g)},
      {"converged", res.converged},
      {"steps", res.steps},
      {"similarity", to_json(res.report)},
      {"trace", trace},
      {"step_stats", steps},
      {"timings", to_json(sp.timings())},
  };
}

void write_heat_csv(std::ostream& out, const Graph& g, std::span<const EdgeHeat> heats,
                    std::span<const VertexId> original_id) {
  auto map = [&](VertexId v) { return original_id.empty() ? v : original_id[v]; };
  const auto old = out.precision(17);
  out << "rank,edge,p,q,heat,normalized\n";
  for (const EdgeHeat& h : heats) {
    const Edge& e = g.edge(h.edge);
    out << h.rank << ',' << h.edge << ',' << map(e.p) << ',' << map(e.q) << ',' << h.heat << ',' << h.normalized
        << '\n';
  }
  out.precision(old);
}

}  // namespace simspar
