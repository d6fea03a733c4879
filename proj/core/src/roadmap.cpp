#include "mrx/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "mrx/raycast.hpp"
#include "mrx/sensing.hpp"

namespace mrx {
namespace {

constexpr double kSamePosition = 1e-9;

int lattice_cells(const OccupancyGrid& grid, double lattice_m) {
  return std::max(1, static_cast<int>(std::lround(lattice_m / grid.resolution())));
}

/// Uniform buckets over point positions for radius queries.
class PointBuckets {
 public:
  PointBuckets(std::span<const Vec2> pts, double bucket_m) : pts_(pts), size_(bucket_m) {
    if (pts.empty()) return;
    min_ = max_ = pts[0];
    for (const Vec2& p : pts) {
      min_.x = std::min(min_.x, p.x);
      min_.y = std::min(min_.y, p.y);
      max_.x = std::max(max_.x, p.x);
      max_.y = std::max(max_.y, p.y);
    }
    nx_ = static_cast<int>((max_.x - min_.x) / size_) + 1;
    ny_ = static_cast<int>((max_.y - min_.y) / size_) + 1;
    buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[bucket(pts[i])].push_back(i);
  }

  /// Indices within `radius` of `p` (radius must not exceed bucket size).
  void query(Vec2 p, double radius, std::vector<std::size_t>& out) const {
    out.clear();
    if (pts_.empty()) return;
    const double r2 = radius * radius;
    const int bx = static_cast<int>(std::floor((p.x - min_.x) / size_));
    const int by = static_cast<int>(std::floor((p.y - min_.y) / size_));
    for (int y = by - 1; y <= by + 1; ++y) {
      if (y < 0 || y >= ny_) continue;
      for (int x = bx - 1; x <= bx + 1; ++x) {
        if (x < 0 || x >= nx_) continue;
        for (std::size_t i : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
          if (squared_distance(pts_[i], p) <= r2) out.push_back(i);
        }
      }
    }
  }

 private:
  std::size_t bucket(Vec2 p) const {
    const int x = std::min(nx_ - 1, static_cast<int>((p.x - min_.x) / size_));
    const int y = std::min(ny_ - 1, static_cast<int>((p.y - min_.y) / size_));
    return static_cast<std::size_t>(y) * nx_ + x;
  }

  std::span<const Vec2> pts_;
  double size_;
  Vec2 min_;
  Vec2 max_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::vector<std::size_t>> buckets_;
};

/// k nearest line-of-sight neighbours of `self` among `candidates`.
void nearest_visible(std::span<const Vec2> pts, std::size_t self,
                     std::vector<std::size_t>& candidates, const OccupancyGrid& grid, int k,
                     std::vector<std::size_t>& out) {
  out.clear();
  const Vec2 p = pts[self];
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    const double da = squared_distance(pts[a], p);
    const double db = squared_distance(pts[b], p);
    return da != db ? da < db : a < b;
  });
  const Cell from = grid.world_to_cell(p);
  for (std::size_t j : candidates) {
    if (j == self) continue;
    if (static_cast<int>(out.size()) >= k) break;
    if (line_of_sight(grid, from, grid.world_to_cell(pts[j]))) out.push_back(j);
  }
}

}  // namespace

void GraphParams::validate() const {
  if (!(lattice_m > 0.0) || k < 1 || !(sensor_range_m > 0.0) ||
      !(cluster_radius_m > 0.0) || !(merge_radius_m > 0.0) || prune_period < 1) {
    throw std::invalid_argument("GraphParams: all parameters must be positive");
  }
}

FrontierIndex::FrontierIndex(const OccupancyGrid& belief, double bucket_m)
    : cells_(extract_frontiers(belief)) {
  bucket_cells_ = std::max(1, static_cast<int>(std::lround(bucket_m / belief.resolution())));
  bw_ = belief.width() / bucket_cells_ + 1;
  bh_ = belief.height() / bucket_cells_ + 1;
  buckets_.resize(static_cast<std::size_t>(bw_) * static_cast<std::size_t>(bh_));
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell c = cells_[i];
    buckets_[static_cast<std::size_t>(c.y / bucket_cells_) * bw_ + c.x / bucket_cells_]
        .push_back(i);
  }
}

int FrontierIndex::visible_count(const OccupancyGrid& belief, Vec2 pos, double range_m) const {
  const Cell origin = belief.world_to_cell(pos);
  if (!belief.in_bounds(origin) || belief.at(origin) != CellState::Free) return 0;
  const double r = range_m / belief.resolution();
  const double r2 = r * r;
  const int reach = static_cast<int>(std::floor(r));
  const int bx0 = std::max(0, (origin.x - reach) / bucket_cells_);
  const int bx1 = std::min(bw_ - 1, (origin.x + reach) / bucket_cells_);
  const int by0 = std::max(0, (origin.y - reach) / bucket_cells_);
  const int by1 = std::min(bh_ - 1, (origin.y + reach) / bucket_cells_);
  int count = 0;
  for (int by = by0; by <= by1; ++by) {
    for (int bx = bx0; bx <= bx1; ++bx) {
      for (std::size_t i : buckets_[static_cast<std::size_t>(by) * bw_ + bx]) {
        const Cell f = cells_[i];
        const double dx = f.x - origin.x;
        const double dy = f.y - origin.y;
        if (dx * dx + dy * dy > r2) continue;
        if (line_of_sight(belief, origin, f)) ++count;
      }
    }
  }
  return count;
}

std::vector<std::pair<std::size_t, std::size_t>> knn_los_edges(std::span<const Vec2> vertices,
                                                               const OccupancyGrid& grid, int k,
                                                               double max_edge_m) {
  if (k < 1) throw std::invalid_argument("knn_los_edges: k must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  PointBuckets buckets(vertices, max_edge_m);
  std::vector<std::size_t> cand;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    buckets.query(vertices[i], max_edge_m, cand);
    nearest_visible(vertices, i, cand, grid, k, chosen);
    for (std::size_t j : chosen) edges.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void connect_knn_los(HierGraph& graph, std::span<const std::size_t> from,
                     const OccupancyGrid& grid, int k, double max_edge_m) {
  if (from.empty()) return;
  const std::vector<Vec2> pts = graph.positions();
  PointBuckets buckets(pts, max_edge_m);
  std::vector<std::size_t> cand;
  std::vector<std::size_t> chosen;
  for (std::size_t i : from) {
    buckets.query(pts[i], max_edge_m, cand);
    nearest_visible(pts, i, cand, grid, k, chosen);
    for (std::size_t j : chosen) graph.add_edge(i, j);
  }
}

std::vector<Vec2> lattice_points(const OccupancyGrid& grid, Vec2 center, double half_width_m,
                                 double lattice_m) {
  const int s = lattice_cells(grid, lattice_m);
  const int off = s / 2;
  const double res = grid.resolution();
  const int x0 = std::max(0, static_cast<int>(std::floor((center.x - half_width_m) / res)));
  const int x1 = std::min(grid.width() - 1, static_cast<int>(std::floor((center.x + half_width_m) / res)));
  const int y0 = std::max(0, static_cast<int>(std::floor((center.y - half_width_m) / res)));
  const int y1 = std::min(grid.height() - 1, static_cast<int>(std::floor((center.y + half_width_m) / res)));
  std::vector<Vec2> out;
  for (int y = y0; y <= y1; ++y) {
    if (((y - off) % s + s) % s != 0) continue;
    for (int x = x0; x <= x1; ++x) {
      if (((x - off) % s + s) % s != 0) continue;
      const Vec2 c = grid.cell_center({x, y});
      if (std::abs(c.x - center.x) <= half_width_m && std::abs(c.y - center.y) <= half_width_m) {
        out.push_back(c);
      }
    }
  }
  return out;
}

HierGraph build_local_graph(const OccupancyGrid& belief, Vec2 robot_pos,
                            const GraphParams& params) {
  const FrontierIndex frontiers(belief, params.sensor_range_m);
  return build_local_graph(belief, robot_pos, params, frontiers);
}

HierGraph build_local_graph(const OccupancyGrid& belief, Vec2 robot_pos,
                            const GraphParams& params, const FrontierIndex& frontiers) {
  params.validate();
  const Vec2 robot = belief.snap(robot_pos);
  const Cell rc = belief.world_to_cell(robot);
  if (!belief.in_bounds(rc) || belief.at(rc) != CellState::Free) {
    throw std::invalid_argument("build_local_graph: robot is not on a Free cell");
  }
  HierGraph g;
  g.add_vertex(robot, Layer::Local);
  for (const Vec2& p : lattice_points(belief, robot, params.box_half(), params.lattice_m)) {
    if (p == robot) continue;
    if (belief.at(belief.world_to_cell(p)) != CellState::Free) continue;
    g.add_vertex(p, Layer::Local);
  }
  const std::vector<Vec2> pts = g.positions();
  for (const auto& [a, b] : knn_los_edges(pts, belief, params.k, params.max_edge())) {
    g.add_edge(a, b);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.vertex(i).utility = frontiers.visible_count(belief, g.vertex(i).pos, params.sensor_range_m);
  }
  return g;
}

std::vector<FrontierCenter> frontier_centers(const HierGraph& local, double radius_m) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local.vertex(i).utility > 0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return local.vertex(a).utility > local.vertex(b).utility;
  });
  const double r2 = radius_m * radius_m;
  std::vector<bool> claimed(local.size(), false);
  std::vector<FrontierCenter> centers;
  for (std::size_t seed : order) {
    if (claimed[seed]) continue;
    const Vec2 sp = local.vertex(seed).pos;
    for (std::size_t j : order) {
      if (!claimed[j] && squared_distance(local.vertex(j).pos, sp) <= r2) claimed[j] = true;
    }
    centers.push_back({sp, local.vertex(seed).utility});
  }
  return centers;
}

std::vector<Cell> grid_astar(const OccupancyGrid& grid, Cell start, Cell goal) {
  auto free = [&](Cell c) { return grid.in_bounds(c) && grid.at(c) == CellState::Free; };
  if (!free(start) || !free(goal)) return {};
  const std::size_t n = grid.cell_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kDiag = std::numbers::sqrt2;
  std::vector<double> g(n, kInf);
  std::vector<std::size_t> parent(n, ShortestPaths::kNoParent);
  std::vector<char> closed(n, 0);
  auto heuristic = [&](Cell c) {
    const int dx = std::abs(c.x - goal.x);
    const int dy = std::abs(c.y - goal.y);
    return (std::max(dx, dy) - std::min(dx, dy)) + kDiag * std::min(dx, dy);
  };
  using Item = std::tuple<double, double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
  const std::size_t s = grid.index(start);
  const std::size_t t = grid.index(goal);
  g[s] = 0.0;
  open.push({heuristic(start), heuristic(start), s});
  while (!open.empty()) {
    const auto [f, h, i] = open.top();
    open.pop();
    if (closed[i]) continue;
    closed[i] = 1;
    if (i == t) break;
    const Cell c = grid.cell_of_index(i);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell nb{c.x + dx, c.y + dy};
        if (!free(nb)) continue;
        if (dx != 0 && dy != 0 && (!free({c.x + dx, c.y}) || !free({c.x, c.y + dy}))) continue;
        const std::size_t j = grid.index(nb);
        if (closed[j]) continue;
        const double ng = g[i] + ((dx != 0 && dy != 0) ? kDiag : 1.0);
        if (ng < g[j]) {
          g[j] = ng;
          parent[j] = i;
          const double nh = heuristic(nb);
          open.push({ng + nh, nh, j});
        }
      }
    }
  }
  if (!closed[t]) return {};
  std::vector<Cell> path;
  for (std::size_t i = t; i != ShortestPaths::kNoParent; i = parent[i]) {
    path.push_back(grid.cell_of_index(i));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ExtendReport extend_global_graph(HierGraph& global, Vec2 robot_pos,
                                 std::span<const FrontierCenter> centers,
                                 const OccupancyGrid& belief, const GraphParams& params) {
  params.validate();
  const Vec2 robot = belief.snap(robot_pos);
  const Cell rc = belief.world_to_cell(robot);
  if (!belief.in_bounds(rc) || belief.at(rc) != CellState::Free) {
    throw std::invalid_argument("extend_global_graph: robot is not on a Free cell");
  }
  ExtendReport report;
  if (auto found = global.find_at(robot, kSamePosition)) {
    report.robot_vertex = *found;
  } else {
    report.robot_vertex = global.add_vertex(robot, Layer::Global);
    report.added.push_back(report.robot_vertex);
  }
  const int s = lattice_cells(belief, params.lattice_m);
  const double half2 = 0.25 * params.lattice_m * params.lattice_m;
  auto exact = [&](Vec2 p) {
    if (auto same = global.find_at(p, kSamePosition)) return *same;
    const std::size_t idx = global.add_vertex(p, Layer::Global);
    report.added.push_back(idx);
    return idx;
  };
  // An existing vertex stands in for a waypoint when it is close and keeps
  // the chain in sight on both sides.
  auto reuse_or_add = [&](Vec2 p, Vec2 from) {
    if (auto near = global.nearest(p);
        near && squared_distance(global.vertex(*near).pos, p) < half2 &&
        line_of_sight(belief, from, global.vertex(*near).pos) &&
        line_of_sight(belief, global.vertex(*near).pos, p)) {
      return *near;
    }
    return exact(p);
  };
  for (const FrontierCenter& center : centers) {
    const std::vector<Cell> path = grid_astar(belief, rc, belief.world_to_cell(center.pos));
    if (path.empty()) {
      report.unreachable.push_back(center.pos);
      continue;
    }
    // Waypoints every lattice spacing along the path, shortened where the
    // path bends so consecutive waypoints stay in sight. The chain's last
    // vertex always sees path[at].
    std::vector<std::size_t> chain{report.robot_vertex};
    for (std::size_t at = 0; at + 1 < path.size();) {
      const Vec2 from = global.vertex(chain.back()).pos;
      std::size_t next = std::min(path.size() - 1, at + static_cast<std::size_t>(s));
      while (next > at + 1 && !line_of_sight(belief, from, belief.cell_center(path[next]))) --next;
      if (!line_of_sight(belief, from, belief.cell_center(path[next]))) {
        chain.push_back(exact(belief.cell_center(path[at])));
        continue;
      }
      chain.push_back(reuse_or_add(belief.cell_center(path[next]), from));
      at = next;
    }
    global.vertex(chain.back()).anchor = chain.back() != report.robot_vertex;
    for (std::size_t i = 1; i < chain.size(); ++i) {
      const std::size_t a = chain[i - 1];
      const std::size_t b = chain[i];
      if (a != b && line_of_sight(belief, global.vertex(a).pos, global.vertex(b).pos)) {
        global.add_edge(a, b);
      }
    }
  }
  std::vector<std::size_t> wire = report.added;
  if (std::find(wire.begin(), wire.end(), report.robot_vertex) == wire.end()) {
    wire.push_back(report.robot_vertex);
  }
  connect_knn_los(global, wire, belief, params.k, params.max_edge());
  return report;
}

std::size_t sparsify_global_graph(HierGraph& graph, const OccupancyGrid& belief,
                                  const GraphParams& params, std::span<const Vec2> exempt) {
  const double r2 = params.merge_radius_m * params.merge_radius_m;
  auto is_exempt = [&](const Vec2& p) {
    return std::any_of(exempt.begin(), exempt.end(), [&](const Vec2& e) {
      return squared_distance(e, p) <= kSamePosition * kSamePosition;
    });
  };
  std::size_t contracted = 0;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<VertexId> order;
    for (const auto& v : graph.vertices()) order.push_back(v.id);
    std::sort(order.rbegin(), order.rend());
    std::vector<int> label = graph.component_labels();
    for (VertexId id : order) {
      const auto found = graph.index_of(id);
      if (!found) continue;
      const std::size_t v = *found;
      const Vec2 vp = graph.vertex(v).pos;
      if (is_exempt(vp)) continue;

      std::optional<std::size_t> partner;
      double best = 0.0;
      for (std::size_t u = 0; u < graph.size(); ++u) {
        if (u == v || label[u] != label[v]) continue;
        const double d2 = squared_distance(graph.vertex(u).pos, vp);
        if (d2 > r2 || (partner && d2 >= best)) continue;
        if (!line_of_sight(belief, vp, graph.vertex(u).pos)) continue;
        partner = u;
        best = d2;
      }
      if (!partner) continue;
      const std::size_t w = *partner;

      const std::vector<Edge> old_edges = graph.neighbors(v);
      std::vector<std::size_t> added;
      for (const Edge& e : old_edges) {
        if (e.to == w || graph.has_edge(w, e.to)) continue;
        if (line_of_sight(belief, graph.vertex(w).pos, graph.vertex(e.to).pos)) {
          graph.add_edge(w, e.to);
          added.push_back(e.to);
        }
      }
      for (const Edge& e : old_edges) graph.remove_edge(v, e.to);

      // Every former neighbour must still reach w once v is gone.
      std::vector<char> reached(graph.size(), 0);
      std::vector<std::size_t> stack{w};
      reached[w] = 1;
      reached[v] = 1;
      std::size_t pending = 0;
      for (const Edge& e : old_edges) pending += (e.to != w);
      std::vector<char> wanted(graph.size(), 0);
      for (const Edge& e : old_edges) wanted[e.to] = (e.to != w);
      while (!stack.empty() && pending > 0) {
        const std::size_t x = stack.back();
        stack.pop_back();
        for (const Edge& e : graph.neighbors(x)) {
          if (reached[e.to]) continue;
          reached[e.to] = 1;
          if (wanted[e.to]) --pending;
          stack.push_back(e.to);
        }
      }
      if (pending == 0) {
        graph.vertex(w).anchor = graph.vertex(w).anchor || graph.vertex(v).anchor;
        graph.vertex(w).utility = std::max(graph.vertex(w).utility, graph.vertex(v).utility);
        const std::size_t gone[1] = {v};
        graph.remove_vertices(gone);
        ++contracted;
        changed = true;
        label = graph.component_labels();
      } else {
        for (std::size_t n : added) graph.remove_edge(w, n);
        for (const Edge& e : old_edges) graph.add_edge(v, e.to);
      }
    }
  }
  return contracted;
}

MergeReport merge_global_graphs(HierGraph& mine, const HierGraph& incoming,
                                const OccupancyGrid& belief, const GraphParams& params,
                                std::span<const Vec2> exempt) {
  params.validate();
  MergeReport report;
  std::vector<std::size_t> remap(incoming.size());
  std::vector<std::size_t> fresh;
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    GraphVertex v = incoming.vertex(i);
    if (auto same = mine.find_at(v.pos, kSamePosition)) {
      remap[i] = *same;
      mine.vertex(*same).anchor = mine.vertex(*same).anchor || v.anchor;
      continue;
    }
    v.layer = Layer::Global;
    remap[i] = mine.add_vertex_like(v);
    fresh.push_back(remap[i]);
  }
  report.incoming_added = fresh.size();
  for (const auto& e : incoming.edges()) {
    const std::size_t a = remap[e.a];
    const std::size_t b = remap[e.b];
    if (a == b || mine.has_edge(a, b)) continue;
    if (line_of_sight(belief, mine.vertex(a).pos, mine.vertex(b).pos)) mine.add_edge(a, b);
  }
  connect_knn_los(mine, fresh, belief, params.k, params.max_edge());
  report.contracted = sparsify_global_graph(mine, belief, params, exempt);
  return report;
}

HierGraph prune_global_graph(const HierGraph& graph, std::span<const Vec2> robot_positions,
                             std::span<const Vec2> centers) {
  std::vector<bool> keep(graph.size(), false);
  std::vector<EdgeRecord> kept_edges;
  std::vector<std::size_t> robots;
  for (const Vec2& p : robot_positions) {
    const auto idx = graph.find_at(p, kSamePosition);
    if (!idx) throw std::invalid_argument("prune_global_graph: robot position is not a vertex");
    robots.push_back(*idx);
    keep[*idx] = true;
  }
  std::vector<std::size_t> targets;
  for (const Vec2& c : centers) {
    if (auto idx = graph.nearest(c)) targets.push_back(*idx);
  }
  for (std::size_t r : robots) {
    const ShortestPaths sp = dijkstra(graph, r);
    for (std::size_t t : targets) {
      const auto path = sp.path_to(t);
      for (std::size_t i = 0; i < path.size(); ++i) {
        keep[path[i]] = true;
        if (i == 0) continue;
        const std::size_t a = path[i - 1];
        const std::size_t b = path[i];
        for (const Edge& e : graph.neighbors(a)) {
          if (e.to == b) {
            kept_edges.push_back({std::min(a, b), std::max(a, b), e.length});
            break;
          }
        }
      }
    }
  }
  return graph.subgraph(keep, kept_edges);
}

HierGraph planning_graph(const HierGraph& global, const HierGraph& local,
                         const OccupancyGrid& belief, const GraphParams& params,
                         const FrontierIndex& frontiers) {
  HierGraph out;
  for (const auto& v : local.vertices()) out.add_vertex_like(v);
  for (const auto& e : local.edges()) out.add_edge(e.a, e.b);
  const double half2 = 0.25 * params.lattice_m * params.lattice_m;
  std::vector<std::size_t> remap(global.size());
  std::vector<std::size_t> fresh;
  for (std::size_t i = 0; i < global.size(); ++i) {
    const GraphVertex& g = global.vertex(i);
    if (auto near = local.nearest(g.pos);
        near && squared_distance(local.vertex(*near).pos, g.pos) < half2) {
      remap[i] = *near;
      continue;
    }
    GraphVertex copy = g;
    copy.layer = Layer::Global;
    copy.utility = frontiers.visible_count(belief, g.pos, params.sensor_range_m);
    remap[i] = out.add_vertex_like(copy);
    fresh.push_back(remap[i]);
  }
  for (const auto& e : global.edges()) {
    const std::size_t a = remap[e.a];
    const std::size_t b = remap[e.b];
    if (a == b || out.has_edge(a, b)) continue;
    if (line_of_sight(belief, out.vertex(a).pos, out.vertex(b).pos)) out.add_edge(a, b);
  }
  connect_knn_los(out, fresh, belief, params.k, params.max_edge());
  return out;
}

}  // namespace mrx
