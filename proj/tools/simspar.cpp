// simspar: spectral sparsification command-line driver.

#include "simspar/densify.hpp"
#include "simspar/log.hpp"
#include "simspar/partition.hpp"
#include "simspar/report_json.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

namespace {

using namespace simspar;
using nlohmann::json;

enum ExitCode { ok = 0, parse_failure = 1, bad_config = 2, unconverged = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::string format;  // empty: guess from extension
  double sigma2 = 100.0;
  int t = 2;
  std::uint64_t seed = 42;
  std::string output;
  std::string json_report;
  std::size_t num_probes = 0;

  // sparsify
  std::size_t max_edges_per_iter = 0;
  double dedup_overlap = 0.75;
  std::string tree = "max_weight";
  int max_iters = 50;
  double max_density = 4.0;

  // solve
  std::string rhs;
  double tol = 1e-3;
  int solve_iters = 1000;

  // partition
  int power_iters = 3;
  std::string oracle;
  bool normalized = false;

  // eigest / heatdump
  std::string sparsifier;
  int eig_iters = 10;
  double eig_tol = 1e-3;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SparsifyOptions make_options(const RunConfig& c) {
  SparsifyOptions o;
  o.filter.target_sigma2 = c.sigma2;
  o.filter.t = c.t;
  o.filter.max_edges_per_iter = c.max_edges_per_iter;
  o.filter.dedup_overlap = c.dedup_overlap;
  o.limits.max_iters = c.max_iters;
  o.limits.max_density = c.max_density;
  o.tree = c.tree == "low_stretch" ? TreeStrategy::low_stretch : TreeStrategy::max_weight;
  o.seed = c.seed;
  o.num_probes = c.num_probes;
  o.eigen.max_iters = c.eig_iters;
  o.eigen.tol = c.eig_tol;
  try {
    o.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return o;
}

struct Input {
  Graph graph;
  std::vector<VertexId> original_id;  // empty when the input was connected
  std::size_t source_vertices = 0;

  VertexId map(VertexId v) const { return original_id.empty() ? v : original_id[v]; }
};

Input load_input(const RunConfig& c) {
  const GraphFormat fmt = c.format.empty()      ? guess_format(c.input)
                          : c.format == "mtx"   ? GraphFormat::matrix_market
                                                : GraphFormat::edge_list;
  Graph g = load_graph(c.input, fmt);
  Input in;
  in.source_vertices = g.num_vertices();
  if (is_connected(g)) {
    in.graph = std::move(g);
    return in;
  }
  ComponentSubgraph lc = largest_component(g);
  log_warning("input is disconnected; keeping the largest component (" + std::to_string(lc.graph.num_vertices()) +
              " of " + std::to_string(g.num_vertices()) + " vertices)");
  in.graph = std::move(lc.graph);
  in.original_id = std::move(lc.original_id);
  return in;
}

// Reads one value per line, or a Matrix Market array/coordinate vector.
std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path, 0);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  bool mm = false, mm_size_read = false, coordinate = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("%%MatrixMarket", 0) == 0) {
      mm = true;
      coordinate = line.find("coordinate") != std::string::npos;
      continue;
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%' || line[first] == '#') continue;
    std::istringstream ls(line);
    if (mm && !mm_size_read) {
      std::size_t rows = 0, cols = 0, nnz = 0;
      if (!(ls >> rows >> cols)) throw FormatError("bad size line in " + path, lineno);
      if (coordinate) ls >> nnz;
      values.assign(coordinate ? rows : 0, 0.0);
      if (!coordinate) values.reserve(rows * cols);
      mm_size_read = true;
      continue;
    }
    if (mm && coordinate) {
      std::size_t i = 0, j = 0;
      double v = 0.0;
      if (!(ls >> i >> j >> v) || i < 1 || i > values.size()) throw FormatError("bad entry in " + path, lineno);
      values[i - 1] += v;
      continue;
    }
    double v = 0.0;
    if (!(ls >> v)) throw FormatError("expected a number in " + path, lineno);
    values.push_back(v);
  }
  return values;
}

// Restricts a per-source-vertex vector to the kept component.
Vector restrict_to(const Input& in, const std::vector<double>& values, const std::string& what) {
  if (values.size() != in.source_vertices) {
    throw DimensionError(what + " has " + std::to_string(values.size()) + " entries, graph has " +
                         std::to_string(in.source_vertices) + " vertices");
  }
  Vector out(static_cast<Eigen::Index>(in.graph.num_vertices()));
  for (VertexId v = 0; v < in.graph.num_vertices(); ++v) out[v] = values[in.map(v)];
  return out;
}

// Sparsifier edge file (source-graph ids) matched against the kept graph.
std::vector<EdgeId> read_sparsifier_ids(const Input& in, const std::string& path, bool* same_weights) {
  Graph file = load_edge_list(path);
  std::unordered_map<VertexId, VertexId> local;
  for (VertexId v = 0; v < in.graph.num_vertices(); ++v) local.emplace(in.map(v), v);
  std::vector<EdgeId> ids;
  *same_weights = true;
  for (const Edge& e : file.edges()) {
    auto ip = local.find(e.p), iq = local.find(e.q);
    if (ip == local.end() || iq == local.end()) {
      throw ValidationError("sparsifier edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                            ") is outside the input graph");
    }
    auto id = in.graph.find_edge(ip->second, iq->second);
    if (!id) {
      throw ValidationError("sparsifier edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                            ") is not an edge of the input graph");
    }
    if (std::abs(in.graph.edge(*id).w - e.w) > 1e-12 * std::abs(in.graph.edge(*id).w)) *same_weights = false;
    ids.push_back(*id);
  }
  return ids;
}

void emit_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

int cmd_sparsify(const RunConfig& c) {
  const SparsifyOptions opts = make_options(c);
  const Input in = load_input(c);
  SparsifyResult res = sparsify(in.graph, opts);
  if (!c.output.empty()) save_edge_list(c.output, res.sparsifier.edges(), in.original_id);
  json report = sparsify_report(in.graph, res, opts);
  if (!in.original_id.empty()) report["source_vertices"] = in.source_vertices;
  emit_json(report, c.json_report);
  if (!res.converged) log_warning("similarity target not reached within the configured limits");
  return res.converged ? ok : unconverged;
}

Vector random_rhs(std::size_t n, std::uint64_t seed) {
  Vector b = make_probes(n, 1, derive_seed(seed, 7, 0)).front().values();
  return b;
}

int cmd_solve(const RunConfig& c) {
  const SparsifyOptions opts = make_options(c);
  if (!(c.tol > 0.0) || c.solve_iters < 1) throw ConfigError("--tol must be > 0 and --max-solve-iters >= 1");
  const Input in = load_input(c);
  const Graph& g = in.graph;
  Vector b = c.rhs.empty() ? random_rhs(g.num_vertices(), c.seed) : restrict_to(in, read_values(c.rhs), "rhs");

  const auto t0 = std::chrono::steady_clock::now();
  SparsifyResult res = sparsify(g, opts);
  res.sparsifier.refresh();
  const double sparsify_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const LaplacianOperator L(g);
  PcgResult sol = pcg_solve(L, res.sparsifier.solver(), b, c.tol, c.solve_iters);
  const double solve_seconds = seconds_since(t1);

  if (!c.output.empty()) {
    std::ofstream out(c.output);
    out.precision(17);
    std::vector<double> full(in.source_vertices, 0.0);
    for (VertexId v = 0; v < g.num_vertices(); ++v) full[in.map(v)] = sol.x[v];
    for (double x : full) out << x << '\n';
  }
  json j = {{"iterations", sol.iterations},
            {"residual", sol.relative_residual},
            {"converged", sol.converged},
            {"sparsifier_sigma2", res.report.sigma2},
            {"sparsifier_density", res.sparsifier.density()},
            {"sparsify_seconds", sparsify_seconds},
            {"solve_seconds", solve_seconds}};
  emit_json(j, c.json_report);
  return sol.converged ? ok : unconverged;
}

std::vector<std::int8_t> read_oracle_sides(const Input& in, const std::string& path) {
  std::vector<double> values = read_values(path);
  bool labels = true;
  for (double v : values) labels = labels && (v == 0.0 || v == 1.0);
  Vector r = restrict_to(in, values, "oracle");
  std::vector<std::int8_t> side(static_cast<std::size_t>(r.size()));
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const bool pos = labels ? r[i] == 1.0 : r[i] >= 0.0;
    side[static_cast<std::size_t>(i)] = pos ? std::int8_t{1} : std::int8_t{-1};
  }
  return side;
}

int cmd_partition(const RunConfig& c) {
  const SparsifyOptions opts = make_options(c);
  if (c.power_iters < 1) throw ConfigError("--power-iters must be >= 1");
  const Input in = load_input(c);
  const Graph& g = in.graph;

  const auto t0 = std::chrono::steady_clock::now();
  SparsifyResult res = sparsify(g, opts);
  res.sparsifier.refresh();
  const double sparsify_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  FiedlerOptions fo;
  fo.iters = c.power_iters;
  fo.inner_tol = c.tol;
  fo.seed = derive_seed(c.seed, 8, 0);
  fo.normalized = c.normalized;
  FiedlerResult fv = fiedler_vector(g, res.sparsifier.solver(), fo);
  PartitionResult part = sign_cut(g, fv.vector);
  part.iterations = fv.iterations;
  const double partition_seconds = seconds_since(t1);

  if (!c.output.empty()) {
    std::ofstream out(c.output);
    // -1 marks vertices outside the kept component
    std::vector<int> full(in.source_vertices, -1);
    for (VertexId v = 0; v < g.num_vertices(); ++v) full[in.map(v)] = part.side[v] > 0 ? 1 : 0;
    for (int s : full) out << s << '\n';
  }
  json j = {{"balance_ratio", part.balance_ratio},
            {"cut_weight", part.cut_weight},
            {"positive", part.positive},
            {"negative", part.negative},
            {"iterations", part.iterations},
            {"inner_iterations", fv.inner_iterations},
            {"sparsifier_sigma2", res.report.sigma2},
            {"rel_err", nullptr},
            {"sparsify_seconds", sparsify_seconds},
            {"partition_seconds", partition_seconds}};
  if (!c.oracle.empty()) j["rel_err"] = sign_disagreement(part.side, read_oracle_sides(in, c.oracle));
  emit_json(j, c.json_report);
  return ok;
}

// Sparsifier from --sparsifier, or the densification pipeline otherwise.
struct SparsifierInput {
  Graph p;
  bool subgraph = true;
  std::vector<EdgeId> ids;
};

SparsifierInput sparsifier_for(const Input& in, const RunConfig& c, const SparsifyOptions& opts) {
  SparsifierInput s;
  if (!c.sparsifier.empty()) {
    s.ids = read_sparsifier_ids(in, c.sparsifier, &s.subgraph);
    std::vector<Edge> edges;
    std::vector<Edge> file_edges = load_edge_list(c.sparsifier).edges();
    for (std::size_t i = 0; i < s.ids.size(); ++i) {
      Edge e = in.graph.edge(s.ids[i]);
      e.w = file_edges[i].w;
      edges.push_back(e);
    }
    s.p = Graph::from_edges(in.graph.num_vertices(), edges);
    if (!is_connected(s.p)) throw ValidationError("sparsifier does not span the input graph");
    return s;
  }
  SparsifyResult res = sparsify(in.graph, opts);
  s.ids = res.sparsifier.edge_ids();
  s.p = in.graph.subgraph(std::span<const EdgeId>(s.ids));
  return s;
}

int cmd_eigest(const RunConfig& c) {
  const SparsifyOptions opts = make_options(c);
  const Input in = load_input(c);
  const SparsifierInput s = sparsifier_for(in, c, opts);
  auto solver = factorize(s.p, max_degree_vertex(in.graph));
  EigenEstimateOptions eo = opts.eigen;
  eo.seed = derive_seed(c.seed, 9, 0);
  const SimilarityReport r = similarity_report(in.graph, s.p, *solver, eo, s.subgraph);
  emit_json(to_json(r), c.json_report);
  return ok;
}

int cmd_heatdump(const RunConfig& c) {
  const SparsifyOptions opts = make_options(c);
  const Input in = load_input(c);
  const Graph& g = in.graph;
  std::vector<char> mask(g.num_edges(), 0);
  Graph p;
  std::unique_ptr<LaplacianSolver> solver;
  bool subgraph = true;
  if (c.sparsifier.empty()) {
    SpanningTree tree = extract_spanning_tree(g, opts.tree);
    for (EdgeId e : tree.edge_ids()) mask[e] = 1;
    p = g.subgraph(std::span<const char>(mask));
    solver = std::make_unique<TreeSolver>(tree);
  } else {
    SparsifierInput s = sparsifier_for(in, c, opts);
    for (EdgeId e : s.ids) mask[e] = 1;
    p = std::move(s.p);
    subgraph = s.subgraph;
    solver = factorize(p, max_degree_vertex(g));
  }
  EigenEstimateOptions eo = opts.eigen;
  eo.seed = derive_seed(c.seed, 1, 0);
  const SimilarityReport r = similarity_report(g, p, *solver, eo, subgraph);
  const double theta = heat_threshold(c.sigma2, r.lambda_min, r.lambda_max, c.t);

  const std::size_t nprobes = c.num_probes ? c.num_probes : default_probe_count(g.num_vertices());
  const auto probes = make_probes(g.num_vertices(), nprobes, derive_seed(c.seed, 2, 0));
  const LaplacianOperator LG(g);
  const auto iterated = iterate_probes(LG, *solver, probes, c.t);
  const auto heats = edge_joule_heat(g, mask, iterated);

  std::size_t passing = 0;
  while (passing < heats.size() && heats[passing].normalized >= theta) ++passing;

  if (c.output.empty() || c.output == "-") {
    write_heat_csv(std::cout, g, heats, in.original_id);
  } else {
    std::ofstream out(c.output);
    write_heat_csv(out, g, heats, in.original_id);
  }
  json j = {{"theta", theta},
            {"passing", passing},
            {"off_tree_edges", heats.size()},
            {"probes", nprobes},
            {"t", c.t},
            {"similarity", to_json(r)}};
  if (!c.json_report.empty()) {
    emit_json(j, c.json_report);
  } else {
    std::cerr << j.dump() << '\n';
  }
  return ok;
}

void add_shared(CLI::App* app, RunConfig& c) {
  app->add_option("-i,--input", c.input, "Input graph (Matrix Market or edge list)")->required()->check(CLI::ExistingFile);
  app->add_option("--format", c.format, "Input format; guessed from the extension by default")
      ->check(CLI::IsMember({"mtx", "edgelist"}));
  app->add_option("--sigma2", c.sigma2, "Target spectral similarity sigma^2")->capture_default_str();
  app->add_option("--t", c.t, "Generalized power iteration steps per probe")->capture_default_str();
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("-o,--output", c.output, "Primary output file");
  app->add_option("--json-report", c.json_report, "JSON report path (stdout when omitted)");
  app->add_option("--probes", c.num_probes, "Random probe count (0: ceil(log2 n) clamped to [4, 32])")
      ->capture_default_str();
  app->add_option("--max-edges-per-iter", c.max_edges_per_iter, "Edges added per step (0: max(n/100, 32))")
      ->capture_default_str();
  app->add_option("--dedup-overlap", c.dedup_overlap, "Tree-path overlap above which an edge is a duplicate")
      ->capture_default_str();
  app->add_option("--tree", c.tree, "Spanning tree backbone")
      ->check(CLI::IsMember({"max_weight", "low_stretch"}))
      ->capture_default_str();
  app->add_option("--max-iters", c.max_iters, "Densification steps")->capture_default_str();
  app->add_option("--max-density", c.max_density, "Upper bound on sparsifier edges per vertex")->capture_default_str();
  app->add_option("--eig-iters", c.eig_iters, "Power iterations for lambda_max")->capture_default_str();
  app->add_option("--eig-tol", c.eig_tol, "Relative change that stops the lambda_max iteration")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral graph sparsification with a requested similarity level"};
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Progress messages on stderr");
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  RunConfig cfg;
  auto* sp = app.add_subcommand("sparsify", "Grow a sparsifier until the similarity target is met");
  auto* so = app.add_subcommand("solve", "Solve L_G x = b by PCG preconditioned with a sparsifier");
  auto* pa = app.add_subcommand("partition", "Spectral bisection from an approximate Fiedler vector");
  auto* ee = app.add_subcommand("eigest", "Estimate extreme generalized eigenvalues of (L_G, L_P)");
  auto* hd = app.add_subcommand("heatdump", "Ranked normalized Joule heat of off-sparsifier edges as CSV");
  for (auto* sub : {sp, so, pa, ee, hd}) add_shared(sub, cfg);

  so->add_option("--rhs", cfg.rhs, "Right-hand side (one value per line or Matrix Market vector)")
      ->check(CLI::ExistingFile);
  for (auto* sub : {so, pa}) sub->add_option("--tol", cfg.tol, "PCG relative residual tolerance")->capture_default_str();
  so->add_option("--max-solve-iters", cfg.solve_iters, "PCG iteration limit")->capture_default_str();
  pa->add_option("--power-iters", cfg.power_iters, "Inverse power iterations")->capture_default_str();
  pa->add_option("--oracle", cfg.oracle, "Reference sides (0/1) or vector for rel_err")->check(CLI::ExistingFile);
  pa->add_flag("--normalized", cfg.normalized, "Use the normalized Laplacian L x = lambda D x");
  for (auto* sub : {ee, hd}) {
    sub->add_option("--sparsifier", cfg.sparsifier, "Sparsifier edge list; the pipeline builds one when omitted")
        ->check(CLI::ExistingFile);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : bad_config;
  }

  set_log_level(quiet ? LogLevel::quiet : verbose ? LogLevel::info : LogLevel::warning);
  configure_threads_from_env();

  try {
    if (sp->parsed()) return cmd_sparsify(cfg);
    if (so->parsed()) return cmd_solve(cfg);
    if (pa->parsed()) return cmd_partition(cfg);
    if (ee->parsed()) return cmd_eigest(cfg);
    return cmd_heatdump(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "simspar: invalid configuration: " << e.what() << '\n';
    return bad_config;
  } catch (const std::exception& e) {
    std::cerr << "simspar: " << e.what() << '\n';
    return parse_failure;
  }
}
