#pragma once

#include "simspar/graph.hpp"

#include <span>
#include <vector>

namespace simspar {

enum class TreeStrategy {
  max_weight,   // Kruskal on descending weight, lower edge id first on ties
  low_stretch,  // recursive ball-growing decomposition on the 1/w metric
};

/// Rooted spanning tree of a source graph with O(log n) path queries.
///
/// Tree edges are identified either by their source-graph edge id or by the
/// child vertex below them.
class SpanningTree {
 public:
  SpanningTree() = default;

  /// Builds the rooted structure from n-1 edge ids of g. Root is the vertex of
  /// maximum weighted degree in g (lowest id on ties). Throws ValidationError
  /// if the edges do not form a spanning tree.
  static SpanningTree from_edge_ids(const Graph& g, std::vector<EdgeId> tree_edges);

  std::size_t num_vertices() const { return parent_.size(); }
  VertexId root() const { return root_; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  double parent_weight(VertexId v) const { return parent_w_[v]; }
  EdgeId parent_edge(VertexId v) const { return parent_edge_[v]; }
  std::uint32_t depth(VertexId v) const { return depth_[v]; }
  /// Sum of 1/w from the root to v.
  double root_resistance(VertexId v) const { return root_res_[v]; }

  /// Source-graph edge ids of the tree, ascending.
  const std::vector<EdgeId>& edge_ids() const { return edge_ids_; }
  bool contains(EdgeId e) const { return e < in_tree_.size() && in_tree_[e]; }

  /// Vertices in BFS order from the root (parents before children).
  const std::vector<VertexId>& order() const { return order_; }

  VertexId lca(VertexId p, VertexId q) const;

  /// Child vertices of the tree edges on the p-q path (p side first).
  void path_edges(VertexId p, VertexId q, std::vector<VertexId>& out) const;

  std::vector<Edge> edges() const;

 private:
  VertexId root_ = 0;
  std::vector<VertexId> parent_;
  std::vector<double> parent_w_;
  std::vector<EdgeId> parent_edge_;
  std::vector<std::uint32_t> depth_;
  std::vector<double> root_res_;
  std::vector<VertexId> order_;
  std::vector<EdgeId> edge_ids_;
  std::vector<char> in_tree_;
  std::vector<std::vector<VertexId>> up_;  // up_[k][v] = 2^k-th ancestor
};

/// Throws DisconnectedGraphError for disconnected input.
SpanningTree extract_spanning_tree(const Graph& g, TreeStrategy strategy = TreeStrategy::max_weight);

/// Sum of 1/w over the unique tree path; 0 when p == q.
double tree_path_resistance(const SpanningTree& t, VertexId p, VertexId q);

/// w_e times the tree path resistance between the endpoints of e.
/// Exactly 1 for tree edges.
double edge_stretch(const SpanningTree& t, const Graph& g, EdgeId e);
double edge_stretch(const SpanningTree& t, const Edge& e);

/// Sum of edge stretches over all edges of g, i.e. Trace(L_P^+ L_G).
double total_stretch(const SpanningTree& t, const Graph& g);

VertexId max_degree_vertex(const Graph& g);

}  // namespace simspar
