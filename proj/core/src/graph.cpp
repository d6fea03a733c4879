#include "mrx/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <utility>

namespace mrx {

std::size_t HierGraph::add_vertex(Vec2 pos, Layer layer, int utility) {
  GraphVertex v;
  v.pos = pos;
  v.layer = layer;
  v.utility = utility;
  return add_vertex_like(v);
}

std::size_t HierGraph::add_vertex_like(const GraphVertex& v) {
  GraphVertex copy = v;
  copy.id = next_id_++;
  vertices_.push_back(copy);
  adjacency_.emplace_back();
  return vertices_.size() - 1;
}

bool HierGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto& na = adjacency_[a];
  return std::any_of(na.begin(), na.end(), [b](const Edge& e) { return e.to == b; });
}

bool HierGraph::add_edge(std::size_t a, std::size_t b) {
  if (a >= size() || b >= size()) throw std::out_of_range("HierGraph::add_edge");
  if (a == b || has_edge(a, b)) return false;
  const double len = distance(vertices_[a].pos, vertices_[b].pos);
  adjacency_[a].push_back({b, len});
  adjacency_[b].push_back({a, len});
  return true;
}

void HierGraph::remove_edge(std::size_t a, std::size_t b) {
  auto drop = [](std::vector<Edge>& list, std::size_t t) {
    list.erase(std::remove_if(list.begin(), list.end(),
                              [t](const Edge& e) { return e.to == t; }),
               list.end());
  };
  drop(adjacency_[a], b);
  drop(adjacency_[b], a);
}

void HierGraph::remove_vertices(std::span<const std::size_t> indices) {
  if (indices.empty()) return;
  std::vector<bool> gone(size(), false);
  for (std::size_t i : indices) gone.at(i) = true;
  std::vector<std::size_t> remap(size(), ShortestPaths::kNoParent);
  std::size_t next = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!gone[i]) remap[i] = next++;
  }
  std::vector<GraphVertex> vs;
  std::vector<std::vector<Edge>> adj;
  vs.reserve(next);
  adj.reserve(next);
  for (std::size_t i = 0; i < size(); ++i) {
    if (gone[i]) continue;
    vs.push_back(vertices_[i]);
    std::vector<Edge> list;
    list.reserve(adjacency_[i].size());
    for (const Edge& e : adjacency_[i]) {
      if (!gone[e.to]) list.push_back({remap[e.to], e.length});
    }
    adj.push_back(std::move(list));
  }
  vertices_ = std::move(vs);
  adjacency_ = std::move(adj);
}

HierGraph HierGraph::subgraph(const std::vector<bool>& keep,
                              std::span<const EdgeRecord> edges) const {
  HierGraph out;
  out.next_id_ = next_id_;
  std::vector<std::size_t> remap(size(), ShortestPaths::kNoParent);
  for (std::size_t i = 0; i < size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = out.vertices_.size();
    out.vertices_.push_back(vertices_[i]);
    out.adjacency_.emplace_back();
  }
  for (const auto& e : edges) {
    if (remap[e.a] == ShortestPaths::kNoParent || remap[e.b] == ShortestPaths::kNoParent) {
      continue;
    }
    const std::size_t a = remap[e.a];
    const std::size_t b = remap[e.b];
    if (a == b || out.has_edge(a, b)) continue;
    out.adjacency_[a].push_back({b, e.length});
    out.adjacency_[b].push_back({a, e.length});
  }
  return out;
}

std::size_t HierGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

std::vector<EdgeRecord> HierGraph::edges() const {
  std::vector<EdgeRecord> out;
  for (std::size_t a = 0; a < size(); ++a) {
    for (const Edge& e : adjacency_[a]) {
      if (a < e.to) out.push_back({a, e.to, e.length});
    }
  }
  std::sort(out.begin(), out.end(), [](const EdgeRecord& l, const EdgeRecord& r) {
    return std::pair(l.a, l.b) < std::pair(r.a, r.b);
  });
  return out;
}

std::optional<std::size_t> HierGraph::find_at(Vec2 pos, double tolerance) const {
  const double tol2 = tolerance * tolerance;
  for (std::size_t i = 0; i < size(); ++i) {
    if (squared_distance(vertices_[i].pos, pos) <= tol2) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> HierGraph::nearest(Vec2 pos) const {
  std::optional<std::size_t> best;
  double best_d2 = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double d2 = squared_distance(vertices_[i].pos, pos);
    if (!best || d2 < best_d2) {
      best = i;
      best_d2 = d2;
    }
  }
  return best;
}

std::optional<std::size_t> HierGraph::index_of(VertexId id) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (vertices_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<Vec2> HierGraph::positions() const {
  std::vector<Vec2> out;
  out.reserve(size());
  for (const auto& v : vertices_) out.push_back(v.pos);
  return out;
}

std::vector<int> HierGraph::component_labels(int* count) const {
  std::vector<int> label(size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < size(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const Edge& e : adjacency_[v]) {
        if (label[e.to] < 0) {
          label[e.to] = next;
          stack.push_back(e.to);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

int HierGraph::component_count() const {
  int n = 0;
  component_labels(&n);
  return n;
}

std::vector<std::size_t> ShortestPaths::path_to(std::size_t target) const {
  std::vector<std::size_t> path;
  if (target >= dist.size() || !reachable(target)) return path;
  for (std::size_t v = target; v != kNoParent; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPaths dijkstra(const HierGraph& graph, std::size_t source) {
  ShortestPaths sp;
  sp.dist.assign(graph.size(), ShortestPaths::kUnreachable);
  sp.parent.assign(graph.size(), ShortestPaths::kNoParent);
  if (source >= graph.size()) return sp;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
  sp.dist[source] = 0.0;
  open.push({0.0, source});
  std::vector<bool> done(graph.size(), false);
  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (done[v]) continue;
    done[v] = true;
    for (const Edge& e : graph.neighbors(v)) {
      const double nd = d + e.length;
      if (nd < sp.dist[e.to]) {
        sp.dist[e.to] = nd;
        sp.parent[e.to] = v;
        open.push({nd, e.to});
      }
    }
  }
  return sp;
}

}  // namespace mrx
