#include "simspar/spanning_tree.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <queue>

namespace simspar {
namespace {

constexpr VertexId kNone = std::numeric_limits<VertexId>::max();

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), VertexId{0});
  }

  VertexId find(VertexId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<VertexId> parent_;
  std::vector<std::uint8_t> rank_;
};

std::vector<EdgeId> max_weight_tree(const Graph& g) {
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](EdgeId a, EdgeId b) { return g.edge(a).w > g.edge(b).w; });
  DisjointSets sets(g.num_vertices());
  std::vector<EdgeId> tree;
  tree.reserve(g.num_vertices() - 1);
  for (EdgeId e : order) {
    if (sets.unite(g.edge(e).p, g.edge(e).q)) {
      tree.push_back(e);
      if (tree.size() + 1 == g.num_vertices()) break;
    }
  }
  return tree;
}

// Recursive ball growing on edge lengths 1/w. Each region is split into a
// ball around its center (radius chosen in [R/3, 2R/3] to minimise the
// weight of cut edges) and the connected pieces outside it; every piece is
// attached to the ball by its shortest bridging edge and recursed on.
class BallGrowingTree {
 public:
  explicit BallGrowingTree(const Graph& g)
      : g_(g), owner_(g.num_vertices(), 0), dist_(g.num_vertices()), pred_(g.num_vertices()),
        in_ball_(g.num_vertices(), 0) {}

  std::vector<EdgeId> build(VertexId root) {
    std::vector<Region> work;
    Region all{root, next_label_++, {}, 0};
    all.vertices.resize(g_.num_vertices());
    std::iota(all.vertices.begin(), all.vertices.end(), VertexId{0});
    for (VertexId v : all.vertices) owner_[v] = all.label;
    work.push_back(std::move(all));
    while (!work.empty()) {
      Region r = std::move(work.back());
      work.pop_back();
      split(r, work);
    }
    return std::move(tree_);
  }

 private:
  struct Region {
    VertexId center;
    std::uint32_t label;
    std::vector<VertexId> vertices;
    int depth;
  };

  static constexpr std::size_t kLeafSize = 24;
  static constexpr int kMaxDepth = 48;

  // Dijkstra inside the region; returns vertices in nondecreasing distance.
  std::vector<VertexId> shortest_paths(const Region& r) {
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (VertexId v : r.vertices) {
      dist_[v] = std::numeric_limits<double>::infinity();
      pred_[v] = std::numeric_limits<EdgeId>::max();
    }
    std::vector<VertexId> order;
    order.reserve(r.vertices.size());
    dist_[r.center] = 0.0;
    heap.emplace(0.0, r.center);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist_[v]) continue;
      order.push_back(v);
      for (const Neighbor& nb : g_.neighbors(v)) {
        if (owner_[nb.vertex] != r.label) continue;
        const double nd = d + 1.0 / nb.w;
        if (nd < dist_[nb.vertex]) {
          dist_[nb.vertex] = nd;
          pred_[nb.vertex] = nb.edge;
          heap.emplace(nd, nb.vertex);
        }
      }
    }
    return order;
  }

  void split(Region& r, std::vector<Region>& work) {
    if (r.vertices.size() == 1) return;
    auto order = shortest_paths(r);
    if (r.vertices.size() <= kLeafSize || r.depth >= kMaxDepth) {
      for (VertexId v : order) {
        if (v != r.center) tree_.push_back(pred_[v]);
      }
      return;
    }

    const double radius = dist_[order.back()];
    const double lo = radius / 3.0, hi = 2.0 * radius / 3.0;
    double cut = 0.0, best_cut = std::numeric_limits<double>::infinity();
    std::size_t ball_size = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const VertexId v = order[i];
      if (dist_[v] > hi) break;
      for (const Neighbor& nb : g_.neighbors(v)) {
        if (owner_[nb.vertex] != r.label) continue;
        cut += in_ball_[nb.vertex] ? -nb.w : nb.w;
      }
      in_ball_[v] = 1;
      const bool boundary = i + 1 == order.size() || dist_[order[i + 1]] > dist_[v];
      if (dist_[v] >= lo && boundary && cut < best_cut) {
        best_cut = cut;
        ball_size = i + 1;
      } else if (best_cut == std::numeric_limits<double>::infinity() && boundary) {
        ball_size = i + 1;  // largest prefix within hi if no candidate lands in range
      }
    }
    for (VertexId v : order) in_ball_[v] = 0;

    Region ball{r.center, next_label_++, {}, r.depth + 1};
    ball.vertices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(ball_size));
    for (VertexId v : ball.vertices) in_ball_[v] = 1;

    // Connected pieces of the region outside the ball.
    std::vector<VertexId> stack;
    for (std::size_t i = ball_size; i < order.size(); ++i) {
      const VertexId s = order[i];
      if (owner_[s] != r.label) continue;
      Region piece{kNone, next_label_++, {}, r.depth + 1};
      owner_[s] = piece.label;
      stack.push_back(s);
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        piece.vertices.push_back(v);
        for (const Neighbor& nb : g_.neighbors(v)) {
          if (owner_[nb.vertex] == r.label && !in_ball_[nb.vertex]) {
            owner_[nb.vertex] = piece.label;
            stack.push_back(nb.vertex);
          }
        }
      }
      // Bridge: the ball-to-piece edge minimising dist(x) + 1/w.
      double best = std::numeric_limits<double>::infinity();
      EdgeId bridge = std::numeric_limits<EdgeId>::max();
      for (VertexId y : piece.vertices) {
        for (const Neighbor& nb : g_.neighbors(y)) {
          if (!in_ball_[nb.vertex] || owner_[nb.vertex] != r.label) continue;
          const double d = dist_[nb.vertex] + 1.0 / nb.w;
          if (d < best || (d == best && nb.edge < bridge)) {
            best = d;
            bridge = nb.edge;
            piece.center = y;
          }
        }
      }
      tree_.push_back(bridge);
      work.push_back(std::move(piece));
    }
    for (VertexId v : ball.vertices) {
      in_ball_[v] = 0;
      owner_[v] = ball.label;
    }
    work.push_back(std::move(ball));
  }

  const Graph& g_;
  std::vector<std::uint32_t> owner_;
  std::vector<double> dist_;
  std::vector<EdgeId> pred_;
  std::vector<char> in_ball_;
  std::vector<EdgeId> tree_;
  std::uint32_t next_label_ = 0;
};

}  // namespace

VertexId max_degree_vertex(const Graph& g) {
  VertexId best = 0;
  for (VertexId v = 1; v < g.num_vertices(); ++v) {
    if (g.weighted_degree(v) > g.weighted_degree(best)) best = v;
  }
  return best;
}

SpanningTree SpanningTree::from_edge_ids(const Graph& g, std::vector<EdgeId> tree_edges) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw ValidationError("spanning tree of an empty graph");
  if (tree_edges.size() + 1 != n) {
    throw ValidationError("a spanning tree needs exactly n-1 edges, got " + std::to_string(tree_edges.size()));
  }
  std::sort(tree_edges.begin(), tree_edges.end());
  SpanningTree t;
  t.in_tree_.assign(g.num_edges(), 0);
  std::vector<std::size_t> offsets(n + 1, 0);
  for (EdgeId e : tree_edges) {
    if (e >= g.num_edges()) throw ValidationError("tree edge id out of range");
    if (t.in_tree_[e]) throw ValidationError("duplicate tree edge");
    t.in_tree_[e] = 1;
    ++offsets[g.edge(e).p + 1];
    ++offsets[g.edge(e).q + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<EdgeId> adj(2 * tree_edges.size());
  {
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (EdgeId e : tree_edges) {
      adj[fill[g.edge(e).p]++] = e;
      adj[fill[g.edge(e).q]++] = e;
    }
  }

  t.root_ = max_degree_vertex(g);
  t.parent_.assign(n, kNone);
  t.parent_w_.assign(n, 0.0);
  t.parent_edge_.assign(n, std::numeric_limits<EdgeId>::max());
  t.depth_.assign(n, 0);
  t.root_res_.assign(n, 0.0);
  t.order_.reserve(n);
  t.parent_[t.root_] = t.root_;
  t.order_.push_back(t.root_);
  for (std::size_t head = 0; head < t.order_.size(); ++head) {
    const VertexId v = t.order_[head];
    for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      const Edge& e = g.edge(adj[k]);
      const VertexId u = e.p == v ? e.q : e.p;
      if (u == t.parent_[v] && adj[k] == t.parent_edge_[v]) continue;
      if (t.parent_[u] != kNone) throw ValidationError("tree edges contain a cycle");
      t.parent_[u] = v;
      t.parent_w_[u] = e.w;
      t.parent_edge_[u] = adj[k];
      t.depth_[u] = t.depth_[v] + 1;
      t.root_res_[u] = t.root_res_[v] + 1.0 / e.w;
      t.order_.push_back(u);
    }
  }
  if (t.order_.size() != n) throw ValidationError("tree edges do not span the graph");
  t.edge_ids_ = std::move(tree_edges);

  const int levels = std::max(1, static_cast<int>(std::bit_width(n)));
  t.up_.assign(static_cast<std::size_t>(levels), std::vector<VertexId>(n));
  t.up_[0] = t.parent_;
  for (int k = 1; k < levels; ++k) {
    const auto& prev = t.up_[static_cast<std::size_t>(k - 1)];
    auto& cur = t.up_[static_cast<std::size_t>(k)];
    for (std::size_t v = 0; v < n; ++v) cur[v] = prev[prev[v]];
  }
  return t;
}

VertexId SpanningTree::lca(VertexId p, VertexId q) const {
  if (depth_[p] < depth_[q]) std::swap(p, q);
  std::uint32_t diff = depth_[p] - depth_[q];
  for (std::size_t k = 0; diff; ++k, diff >>= 1) {
    if (diff & 1U) p = up_[k][p];
  }
  if (p == q) return p;
  for (std::size_t k = up_.size(); k-- > 0;) {
    if (up_[k][p] != up_[k][q]) {
      p = up_[k][p];
      q = up_[k][q];
    }
  }
  return parent_[p];
}

void SpanningTree::path_edges(VertexId p, VertexId q, std::vector<VertexId>& out) const {
  out.clear();
  const VertexId a = lca(p, q);
  for (; p != a; p = parent_[p]) out.push_back(p);
  const std::size_t mark = out.size();
  for (; q != a; q = parent_[q]) out.push_back(q);
  std::reverse(out.begin() + static_cast<std::ptrdiff_t>(mark), out.end());
}

std::vector<Edge> SpanningTree::edges() const {
  std::vector<Edge> out;
  out.reserve(order_.size());
  for (VertexId v : order_) {
    if (v != root_) out.push_back({parent_[v], v, parent_w_[v]});
  }
  return out;
}

SpanningTree extract_spanning_tree(const Graph& g, TreeStrategy strategy) {
  if (g.num_vertices() == 0) throw DegenerateInputError("empty graph");
  if (!is_connected(g)) {
    throw DisconnectedGraphError("graph is disconnected; reduce it with largest_component first");
  }
  if (g.num_vertices() == 1) return SpanningTree::from_edge_ids(g, {});
  std::vector<EdgeId> edges = strategy == TreeStrategy::max_weight
                                  ? max_weight_tree(g)
                                  : BallGrowingTree(g).build(max_degree_vertex(g));
  return SpanningTree::from_edge_ids(g, std::move(edges));
}

double tree_path_resistance(const SpanningTree& t, VertexId p, VertexId q) {
  if (p == q) return 0.0;
  const VertexId a = t.lca(p, q);
  return (t.root_resistance(p) - t.root_resistance(a)) + (t.root_resistance(q) - t.root_resistance(a));
}

double edge_stretch(const SpanningTree& t, const Edge& e) {
  if ((t.parent(e.p) == e.q && e.p != t.root()) || (t.parent(e.q) == e.p && e.q != t.root())) return 1.0;
  return e.w * tree_path_resistance(t, e.p, e.q);
}

double edge_stretch(const SpanningTree& t, const Graph& g, EdgeId e) {
  if (t.contains(e)) return 1.0;
  return g.edge(e).w * tree_path_resistance(t, g.edge(e).p, g.edge(e).q);
}

double total_stretch(const SpanningTree& t, const Graph& g) {
  double s = 0.0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) s += edge_stretch(t, g, e);
  return s;
}

}  // namespace simspar
