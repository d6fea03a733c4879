#include "support.hpp"

#include <map>

#include "mrx/raycast.hpp"

namespace mrx::test {

HierGraph random_geometric_graph(const OccupancyGrid& grid, int vertices, std::mt19937_64& rng) {
  const std::vector<Cell> free = cells_in(grid, CellState::Free);
  HierGraph g;
  if (free.empty()) return g;
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  int guard = 0;
  while (static_cast<int>(g.size()) < vertices && guard++ < vertices * 50) {
    const Vec2 p = grid.cell_center(free[pick(rng)]);
    if (g.find_at(p)) continue;
    g.add_vertex(p, Layer::Global);
  }
  std::bernoulli_distribution extra(0.3);
  for (std::size_t v = 1; v < g.size(); ++v) {
    std::vector<std::size_t> order(v);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return squared_distance(g.vertex(a).pos, g.vertex(v).pos) <
             squared_distance(g.vertex(b).pos, g.vertex(v).pos);
    });
    int linked = 0;
    for (std::size_t u : order) {
      if (!line_of_sight(grid, g.vertex(u).pos, g.vertex(v).pos)) continue;
      if (linked == 0 || extra(rng)) {
        g.add_edge(u, v);
        ++linked;
      }
      if (linked >= 3) break;
    }
  }
  return g;
}

HierGraph sparse_connected_graph(const OccupancyGrid& grid, int vertices, std::mt19937_64& rng,
                                 const GraphParams& p) {
  HierGraph g = random_geometric_graph(grid, vertices, rng);
  sparsify_global_graph(g, grid, p, {});
  return g;
}

HierGraph raw_union(const HierGraph& mine, const HierGraph& incoming, const OccupancyGrid& grid,
                    const GraphParams& p) {
  HierGraph u = mine;
  std::vector<std::size_t> remap(incoming.size()), fresh;
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    if (auto same = u.find_at(incoming.vertex(i).pos)) {
      remap[i] = *same;
    } else {
      remap[i] = u.add_vertex(incoming.vertex(i).pos, Layer::Global);
      fresh.push_back(remap[i]);
    }
  }
  for (const auto& e : incoming.edges()) u.add_edge(remap[e.a], remap[e.b]);
  connect_knn_los(u, fresh, grid, p.k, p.max_edge());
  return u;
}

UnionCheck compare_with_union(const HierGraph& out, const HierGraph& uni) {
  UnionCheck c;
  std::map<std::pair<double, double>, std::size_t> pos;
  for (std::size_t i = 0; i < uni.size(); ++i) pos[{uni.vertex(i).pos.x, uni.vertex(i).pos.y}] = i;
  UnionFind uf(uni.size());
  for (const auto& e : uni.edges()) uf.unite(e.a, e.b);
  const std::vector<int> label = out.component_labels();
  std::vector<std::size_t> orig;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto it = pos.find({out.vertex(i).pos.x, out.vertex(i).pos.y});
    if (it == pos.end()) {
      ++c.unknown_vertices;
      continue;
    }
    kept.push_back(i);
    orig.push_back(it->second);
  }
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = a + 1; b < kept.size(); ++b)
      if ((label[kept[a]] == label[kept[b]]) != uf.same(orig[a], orig[b])) ++c.relation_mismatches;
  return c;
}

std::size_t close_pairs(const HierGraph& g, double radius, std::span<const Vec2> exempt) {
  auto is_exempt = [&](Vec2 q) { return std::find(exempt.begin(), exempt.end(), q) != exempt.end(); };
  std::size_t n = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (is_exempt(g.vertex(i).pos) && is_exempt(g.vertex(j).pos)) continue;
      if (distance(g.vertex(i).pos, g.vertex(j).pos) <= radius) ++n;
    }
  return n;
}

}  // namespace mrx::test
