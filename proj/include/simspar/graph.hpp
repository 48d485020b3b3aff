#pragma once

#include "simspar/types.hpp"

#include <Eigen/SparseCore>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace simspar {

struct Edge {
  VertexId p;
  VertexId q;
  double w;
};

struct Neighbor {
  VertexId vertex;
  EdgeId edge;
  double w;
};

/// Immutable weighted undirected simple graph.
///
/// Edges keep the order in which they first appeared on construction; a
/// repeated unordered pair is merged into the first occurrence by summing
/// weights. Edge ids are positions in that order and are stable for the
/// lifetime of the graph.
class Graph {
 public:
  Graph() = default;

  /// Validates (ids in range, no self-loops, finite positive weights) and
  /// merges parallel edges. Throws ValidationError.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  bool empty() const { return n_ == 0; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Neighbor> neighbors(VertexId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  double weighted_degree(VertexId v) const { return wdeg_[v]; }
  double max_weighted_degree() const;

  std::optional<EdgeId> find_edge(VertexId p, VertexId q) const;

  /// Same vertex set, the edges with mask[e] != 0, in this graph's edge order.
  Graph subgraph(std::span<const char> edge_mask) const;
  Graph subgraph(std::span<const EdgeId> edge_ids) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adj_;
  std::vector<double> wdeg_;
};

/// y = L_G x where L_G(p,q) = -w(p,q), L_G(p,p) = weighted degree.
class LaplacianOperator {
 public:
  explicit LaplacianOperator(const Graph& g) : g_(&g) {}

  const Graph& graph() const { return *g_; }
  std::size_t size() const { return g_->num_vertices(); }

  // Row-wise sum of w (x_p - x_q); exactly zero on constant vectors.
  void apply(const Vector& x, Vector& y) const;
  Vector apply(const Vector& x) const;

  double diagonal(VertexId p) const { return g_->weighted_degree(p); }

 private:
  const Graph* g_;
};

/// x^T L x as a sum over edges of w (x_p - x_q)^2, in edge order.
double quadratic_form(const LaplacianOperator& L, const Vector& x);

/// L_G with one vertex removed (row and column). Vertices above `ground`
/// shift down by one.
Eigen::SparseMatrix<double> grounded_laplacian(const Graph& g, VertexId ground);

bool is_connected(const Graph& g);

/// Component label per vertex, labels assigned in order of smallest vertex.
std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count = nullptr);

struct ComponentSubgraph {
  Graph graph;
  std::vector<VertexId> original_id;  // new id -> id in the source graph
};

/// Vertex-induced subgraph on the largest connected component, densely
/// re-indexed in increasing original order. Ties go to the component holding
/// the smallest vertex id.
ComponentSubgraph largest_component(const Graph& g);

/// Matrix Market coordinate file (real, integer or pattern; general,
/// symmetric or skew-symmetric) as a graph: edge (p,q), p > q, weighted by
/// |A(p,q)| after summing duplicates; the diagonal is ignored.
Graph load_matrix_market(const std::filesystem::path& path);
Graph read_matrix_market(std::istream& in);

/// Lines "p q [w]" with 0-based ids; '#' and '%' start comments.
Graph load_edge_list(const std::filesystem::path& path);
Graph read_edge_list(std::istream& in);

/// Writes "p q w" per edge with 17 significant digits. When original_id is
/// given, vertex ids are mapped through it.
void write_edge_list(std::ostream& out, std::span<const Edge> edges,
                     std::span<const VertexId> original_id = {});
void save_edge_list(const std::filesystem::path& path, std::span<const Edge> edges,
                    std::span<const VertexId> original_id = {});

enum class GraphFormat { matrix_market, edge_list };

/// .mtx -> matrix_market, anything else -> edge_list.
GraphFormat guess_format(const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path, GraphFormat format);

}  // namespace simspar
