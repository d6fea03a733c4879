#pragma once

// Independent oracles and fixtures shared by the test binaries.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "mrx/geometry.hpp"
#include "mrx/graph.hpp"
#include "mrx/grid.hpp"
#include "mrx/roadmap.hpp"

namespace mrx::test {

/// Random truth grid: Occupied border, interior cells Occupied with
/// probability `density`, guaranteed one Free cell in the middle.
inline OccupancyGrid random_grid(int w, int h, double density, std::mt19937_64& rng,
                                 double res = 0.5) {
  OccupancyGrid g(w, h, res, CellState::Free);
  std::bernoulli_distribution occ(density);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
      if (border || occ(rng)) g.set({x, y}, CellState::Occupied);
    }
  }
  g.set({w / 2, h / 2}, CellState::Free);
  return g;
}

inline std::vector<Cell> cells_in(const OccupancyGrid& g, CellState s) {
  std::vector<Cell> out;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (g.at({x, y}) == s) out.push_back({x, y});
    }
  }
  return out;
}

/// Exact test whether the closed segment between the centers of cells a and
/// b intersects the closed unit square of cell c. Coordinates are doubled so
/// centers and corners are integers; the segment meets the box iff their
/// bounding boxes overlap and the box corners are not strictly on one side
/// of the supporting line.
inline bool segment_touches_cell(Cell a, Cell b, Cell c) {
  const long long px = 2LL * a.x + 1, py = 2LL * a.y + 1;
  const long long qx = 2LL * b.x + 1, qy = 2LL * b.y + 1;
  const long long lx = 2LL * c.x, ly = 2LL * c.y, hx = lx + 2, hy = ly + 2;
  if (std::max(px, qx) < lx || std::min(px, qx) > hx) return false;
  if (std::max(py, qy) < ly || std::min(py, qy) > hy) return false;
  const long long dx = qx - px, dy = qy - py;
  int pos = 0, neg = 0;
  for (long long cx : {lx, hx}) {
    for (long long cy : {ly, hy}) {
      const long long cr = dx * (cy - py) - dy * (cx - px);
      pos += cr > 0;
      neg += cr < 0;
    }
  }
  return !(pos == 4 || neg == 4);
}

/// Line of sight by brute force over every cell of the bounding box.
inline bool los_oracle(const OccupancyGrid& g, Cell a, Cell b) {
  for (int y = std::min(a.y, b.y); y <= std::max(a.y, b.y); ++y) {
    for (int x = std::min(a.x, b.x); x <= std::max(a.x, b.x); ++x) {
      if (!segment_touches_cell(a, b, {x, y})) continue;
      if (!g.in_bounds({x, y}) || g.at({x, y}) != CellState::Free) return false;
    }
  }
  return true;
}

/// Cells visible from `origin` within `range_cells` (center distance): no
/// Occupied cell other than the target touches the segment.
inline std::vector<Cell> visibility_oracle(const OccupancyGrid& g, Cell origin,
                                           double range_cells) {
  std::vector<Cell> out;
  const double r2 = range_cells * range_cells;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const double ddx = x - origin.x, ddy = y - origin.y;
      if (ddx * ddx + ddy * ddy > r2) continue;
      bool blocked = false;
      for (int yy = std::min(origin.y, y); yy <= std::max(origin.y, y) && !blocked; ++yy) {
        for (int xx = std::min(origin.x, x); xx <= std::max(origin.x, x); ++xx) {
          if (xx == x && yy == y) continue;
          if (g.at({xx, yy}) != CellState::Occupied) continue;
          if (segment_touches_cell(origin, {x, y}, {xx, yy})) {
            blocked = true;
            break;
          }
        }
      }
      if (!blocked) out.push_back({x, y});
    }
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

 private:
  std::vector<std::size_t> parent_;
};

/// Textbook O(V^2) Dijkstra over the adjacency of `g`.
inline std::vector<double> dijkstra_oracle(const HierGraph& g, std::size_t src) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(g.size(), inf);
  std::vector<bool> done(g.size(), false);
  d[src] = 0.0;
  for (std::size_t it = 0; it < g.size(); ++it) {
    std::size_t u = g.size();
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (!done[v] && d[v] < inf && (u == g.size() || d[v] < d[u])) u = v;
    }
    if (u == g.size()) break;
    done[u] = true;
    for (const Edge& e : g.neighbors(u)) d[e.to] = std::min(d[e.to], d[u] + e.length);
  }
  return d;
}

/// Random connected geometric graph on Free cell centers of `grid`: random
/// lattice-free positions wired to their nearest earlier vertex plus extra
/// short edges, all in line of sight.
HierGraph random_geometric_graph(const OccupancyGrid& grid, int vertices, std::mt19937_64& rng);

/// random_geometric_graph already thinned by sparsification.
HierGraph sparse_connected_graph(const OccupancyGrid& grid, int vertices, std::mt19937_64& rng,
                                 const GraphParams& p);

/// Reference union before sparsification: vertices identified by position,
/// both edge sets, and the kNN attachment of the incoming newcomers.
HierGraph raw_union(const HierGraph& mine, const HierGraph& incoming, const OccupancyGrid& grid,
                    const GraphParams& p);

struct UnionCheck {
  /// Output vertices with no vertex at the same position in the union.
  std::size_t unknown_vertices = 0;
  /// Surviving pairs whose same-component relation differs from the union's.
  std::size_t relation_mismatches = 0;
  bool ok() const { return unknown_vertices == 0 && relation_mismatches == 0; }
};

/// Same-component relation of `out` vs union-find over the edges of `uni`.
UnionCheck compare_with_union(const HierGraph& out, const HierGraph& uni);

/// Pairs of vertices closer than `radius`, skipping pairs where both
/// positions are in `exempt`.
std::size_t close_pairs(const HierGraph& g, double radius, std::span<const Vec2> exempt);

}  // namespace mrx::test
