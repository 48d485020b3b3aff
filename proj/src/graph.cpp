#include "simspar/graph.hpp"

#include "simspar/log.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace simspar {
namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename Int>
bool parse_int(std::string_view tok, Int& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_real(std::string_view tok, double& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (ec == std::errc() && ptr == tok.data() + tok.size()) return true;
  // from_chars rejects a leading '+', which some writers emit.
  if (!tok.empty() && tok.front() == '+') return parse_real(tok.substr(1), out);
  return false;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n > std::numeric_limits<VertexId>::max()) throw ValidationError("too many vertices");
  Graph g;
  g.n_ = n;
  std::unordered_map<std::uint64_t, EdgeId> index;
  index.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.p >= n || e.q >= n) {
      throw ValidationError("edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                            ") has a vertex id outside [0, " + std::to_string(n) + ")");
    }
    if (e.p == e.q) throw ValidationError("self-loop at vertex " + std::to_string(e.p));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw ValidationError("edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                            ") has non-positive or non-finite weight");
    }
    auto [it, inserted] = index.try_emplace(pair_key(e.p, e.q), static_cast<EdgeId>(g.edges_.size()));
    if (inserted) {
      g.edges_.push_back(e);
    } else {
      g.edges_[it->second].w += e.w;
    }
  }

  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.offsets_[e.p + 1];
    ++g.offsets_[e.q + 1];
  }
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.adj_.resize(2 * g.edges_.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId id = 0; id < g.edges_.size(); ++id) {
    const Edge& e = g.edges_[id];
    g.adj_[fill[e.p]++] = {e.q, id, e.w};
    g.adj_[fill[e.q]++] = {e.p, id, e.w};
  }
  g.wdeg_.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    double s = 0.0;
    for (const Neighbor& nb : g.neighbors(static_cast<VertexId>(v))) s += nb.w;
    g.wdeg_[v] = s;
  }
  return g;
}

double Graph::max_weighted_degree() const {
  return wdeg_.empty() ? 0.0 : *std::max_element(wdeg_.begin(), wdeg_.end());
}

std::optional<EdgeId> Graph::find_edge(VertexId p, VertexId q) const {
  if (p >= n_ || q >= n_) return std::nullopt;
  if (degree(q) < degree(p)) std::swap(p, q);
  for (const Neighbor& nb : neighbors(p)) {
    if (nb.vertex == q) return nb.edge;
  }
  return std::nullopt;
}

Graph Graph::subgraph(std::span<const char> edge_mask) const {
  if (edge_mask.size() != edges_.size()) throw DimensionError("edge mask size mismatch");
  std::vector<Edge> kept;
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    if (edge_mask[e]) kept.push_back(edges_[e]);
  }
  return from_edges(n_, kept);
}

Graph Graph::subgraph(std::span<const EdgeId> edge_ids) const {
  std::vector<char> mask(edges_.size(), 0);
  for (EdgeId e : edge_ids) mask.at(e) = 1;
  return subgraph(mask);
}

void LaplacianOperator::apply(const Vector& x, Vector& y) const {
  const std::size_t n = g_->num_vertices();
  if (static_cast<std::size_t>(x.size()) != n) throw DimensionError("Laplacian apply: dimension mismatch");
  y.resize(static_cast<Eigen::Index>(n));
  const auto nn = static_cast<std::int64_t>(n);
#ifdef SIMSPAR_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (nn > 20000)
#endif
  for (std::int64_t v = 0; v < nn; ++v) {
    const double xv = x[v];
    double s = 0.0;
    for (const Neighbor& nb : g_->neighbors(static_cast<VertexId>(v))) s += nb.w * (xv - x[nb.vertex]);
    y[v] = s;
  }
}

Vector LaplacianOperator::apply(const Vector& x) const {
  Vector y;
  apply(x, y);
  return y;
}

double quadratic_form(const LaplacianOperator& L, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != L.size()) throw DimensionError("quadratic_form: dimension mismatch");
  double s = 0.0;
  for (const Edge& e : L.graph().edges()) {
    const double d = x[e.p] - x[e.q];
    s += e.w * d * d;
  }
  return s;
}

Eigen::SparseMatrix<double> grounded_laplacian(const Graph& g, VertexId ground) {
  const std::size_t n = g.num_vertices();
  if (ground >= n) throw DimensionError("ground vertex out of range");
  auto idx = [ground](VertexId v) { return static_cast<int>(v < ground ? v : v - 1); };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n + 2 * g.num_edges());
  for (VertexId v = 0; v < n; ++v) {
    if (v != ground) trip.emplace_back(idx(v), idx(v), g.weighted_degree(v));
  }
  for (const Edge& e : g.edges()) {
    if (e.p == ground || e.q == ground) continue;
    trip.emplace_back(idx(e.p), idx(e.q), -e.w);
    trip.emplace_back(idx(e.q), idx(e.p), -e.w);
  }
  const auto m = static_cast<Eigen::Index>(n - 1);
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> label(n, unset);
  std::vector<VertexId> stack;
  std::uint32_t next = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(v)) {
        if (label[nb.vertex] == unset) {
          label[nb.vertex] = next;
          stack.push_back(nb.vertex);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

bool is_connected(const Graph& g) {
  std::size_t count = 0;
  connected_components(g, &count);
  return count <= 1;
}

ComponentSubgraph largest_component(const Graph& g) {
  std::size_t count = 0;
  auto label = connected_components(g, &count);
  ComponentSubgraph out;
  if (count <= 1) {
    out.graph = g;
    out.original_id.resize(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) out.original_id[v] = v;
    return out;
  }
  std::vector<std::size_t> sizes(count, 0);
  for (auto l : label) ++sizes[l];
  // Labels follow smallest-vertex order, so the first maximum wins ties.
  const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<VertexId> new_id(g.num_vertices(), std::numeric_limits<VertexId>::max());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (label[v] == best) {
      new_id[v] = static_cast<VertexId>(out.original_id.size());
      out.original_id.push_back(v);
    }
  }
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    if (label[e.p] == best) kept.push_back({new_id[e.p], new_id[e.q], e.w});
  }
  out.graph = Graph::from_edges(out.original_id.size(), kept);
  return out;
}

Graph read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw FormatError("empty Matrix Market file", 0);
  ++lineno;
  auto header = split_ws(line);
  if (header.size() < 5 || lower(header[0]) != "%%matrixmarket") {
    throw FormatError("missing %%MatrixMarket header", lineno);
  }
  const std::string object = lower(header[1]), format = lower(header[2]), field = lower(header[3]),
                    symmetry = lower(header[4]);
  if (object != "matrix") throw FormatError("unsupported object '" + object + "'", lineno);
  if (format != "coordinate") throw FormatError("only coordinate format is supported", lineno);
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer" && field != "double") {
    throw FormatError("unsupported field '" + field + "'", lineno);
  }
  const bool symmetric = symmetry == "symmetric" || symmetry == "skew-symmetric";
  if (!symmetric && symmetry != "general") throw FormatError("unsupported symmetry '" + symmetry + "'", lineno);

  std::size_t rows = 0, cols = 0, nnz = 0;
  bool have_size = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '%') continue;
    if (tok.size() != 3 || !parse_int(tok[0], rows) || !parse_int(tok[1], cols) || !parse_int(tok[2], nnz)) {
      throw FormatError("malformed size line", lineno);
    }
    have_size = true;
    break;
  }
  if (!have_size) throw FormatError("missing size line", lineno);
  if (rows != cols) throw FormatError("matrix is not square", lineno);
  if (rows > std::numeric_limits<VertexId>::max()) throw FormatError("matrix too large", lineno);

  struct Acc {
    VertexId p, q;
    double sum;
  };
  std::vector<Acc> acc;
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(nnz);
  std::size_t seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '%') continue;
    std::size_t i = 0, j = 0;
    double v = 1.0;
    const std::size_t want = pattern ? 2 : 3;
    if (tok.size() < want || !parse_int(tok[0], i) || !parse_int(tok[1], j) ||
        (!pattern && !parse_real(tok[2], v))) {
      throw FormatError("malformed entry", lineno);
    }
    if (i < 1 || j < 1 || i > rows || j > cols) throw FormatError("entry index out of range", lineno);
    if (!std::isfinite(v)) throw FormatError("non-finite entry", lineno);
    ++seen;
    if (i == j) continue;
    if (i < j) {
      if (!symmetric) continue;
      std::swap(i, j);
    }
    auto p = static_cast<VertexId>(i - 1), q = static_cast<VertexId>(j - 1);
    auto [it, inserted] = index.try_emplace(pair_key(p, q), acc.size());
    if (inserted) {
      acc.push_back({p, q, v});
    } else {
      acc[it->second].sum += v;
    }
  }
  if (seen < nnz) {
    throw FormatError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen), lineno);
  }

  std::vector<Edge> edges;
  edges.reserve(acc.size());
  for (const Acc& a : acc) {
    if (a.sum != 0.0) edges.push_back({a.p, a.q, std::abs(a.sum)});
  }
  if (edges.empty()) throw DegenerateInputError("matrix has no off-diagonal entries");
  return Graph::from_edges(rows, edges);
}

Graph load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return read_matrix_market(in);
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Edge> edges;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find_first_of("#%"); c != std::string::npos) line.resize(c);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() > 3) throw FormatError("expected 'p q [w]'", lineno);
    if (tok.size() < 2) throw FormatError("expected 'p q [w]'", lineno);
    VertexId p = 0, q = 0;
    if (!parse_int(tok[0], p) || !parse_int(tok[1], q)) throw FormatError("non-integer vertex id", lineno);
    double w = 1.0;
    if (tok.size() == 3 && !parse_real(tok[2], w)) throw FormatError("malformed weight", lineno);
    if (p == q) throw ValidationError("self-loop at vertex " + std::to_string(p) + " (line " + std::to_string(lineno) + ")");
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError("non-positive weight (line " + std::to_string(lineno) + ")");
    }
    edges.push_back({p, q, w});
    n = std::max<std::size_t>(n, std::max(p, q) + std::size_t{1});
  }
  if (edges.empty()) throw DegenerateInputError("edge list has no edges");
  return Graph::from_edges(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, std::span<const Edge> edges, std::span<const VertexId> original_id) {
  auto map = [&](VertexId v) { return original_id.empty() ? v : original_id[v]; };
  const auto old = out.precision(17);
  for (const Edge& e : edges) out << map(e.p) << ' ' << map(e.q) << ' ' << e.w << '\n';
  out.precision(old);
}

void save_edge_list(const std::filesystem::path& path, std::span<const Edge> edges,
                    std::span<const VertexId> original_id) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_edge_list(out, edges, original_id);
}

GraphFormat guess_format(const std::filesystem::path& path) {
  return lower(path.extension().string()) == ".mtx" ? GraphFormat::matrix_market : GraphFormat::edge_list;
}

Graph load_graph(const std::filesystem::path& path, GraphFormat format) {
  return format == GraphFormat::matrix_market ? load_matrix_market(path) : load_edge_list(path);
}

}  // namespace simspar
