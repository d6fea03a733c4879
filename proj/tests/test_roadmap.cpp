#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "mrx/graph_io.hpp"
#include "mrx/mapgen.hpp"
#include "mrx/raycast.hpp"
#include "mrx/roadmap.hpp"
#include "mrx/sensing.hpp"
#include "support.hpp"

namespace mrx {
namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

// Truth map plus a belief built from a few scans around a random start.
struct Scene {
  OccupancyGrid truth;
  OccupancyGrid belief;
  Vec2 robot;
};

Scene random_scene(std::uint64_t seed, MapKind kind = MapKind::Simple, int w = 60, int h = 60) {
  std::mt19937_64 rng(seed);
  Scene s;
  s.truth = generate_map(MapSpec::cells(kind, seed, w, h));
  s.belief = OccupancyGrid(w, h, s.truth.resolution());
  const std::vector<Cell> free = test::cells_in(s.truth, CellState::Free);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  s.robot = s.truth.cell_center(free[pick(rng)]);
  s.belief = integrate_scan(s.belief, lidar_scan(s.truth, s.robot, {8.0, 360}));
  for (int i = 0; i < 3; ++i) {
    const std::vector<Cell> known = test::cells_in(s.belief, CellState::Free);
    const Cell c = known[std::uniform_int_distribution<std::size_t>(0, known.size() - 1)(rng)];
    s.belief = integrate_scan(s.belief, lidar_scan(s.truth, s.truth.cell_center(c), {8.0, 360}));
  }
  return s;
}

void expect_edges_valid(const HierGraph& g, const OccupancyGrid& belief) {
  for (const EdgeRecord& e : g.edges()) {
    EXPECT_TRUE(line_of_sight(belief, g.vertex(e.a).pos, g.vertex(e.b).pos));
    EXPECT_DOUBLE_EQ(e.length, distance(g.vertex(e.a).pos, g.vertex(e.b).pos));
  }
}

Pairs knn_oracle(const std::vector<Vec2>& pts, const OccupancyGrid& grid, int k, double max_edge) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double da = squared_distance(pts[a], pts[i]), db = squared_distance(pts[b], pts[i]);
      return da != db ? da < db : a < b;
    });
    int taken = 0;
    for (std::size_t j : order) {
      if (taken == k) break;
      if (distance(pts[i], pts[j]) > max_edge) break;
      if (!test::los_oracle(grid, grid.world_to_cell(pts[i]), grid.world_to_cell(pts[j]))) continue;
      out.insert({std::min(i, j), std::max(i, j)});
      ++taken;
    }
  }
  return {out.begin(), out.end()};
}

TEST(LineOfSight, Basics) {
  OccupancyGrid g(10, 10, 1.0, CellState::Free);
  EXPECT_TRUE(line_of_sight(g, Vec2{3.5, 3.5}, Vec2{3.5, 3.5}));
  g.set({5, 3}, CellState::Occupied);
  EXPECT_FALSE(line_of_sight(g, Vec2{2.5, 3.5}, Vec2{8.5, 3.5}));
  g.set({5, 3}, CellState::Unknown);
  EXPECT_FALSE(line_of_sight(g, Vec2{2.5, 3.5}, Vec2{8.5, 3.5}));
  EXPECT_FALSE(line_of_sight(g, Vec2{2.5, 3.5}, Vec2{12.5, 3.5}));
}

TEST(Knn, Trivial) {
  OccupancyGrid g(20, 20, 1.0, CellState::Free);
  const std::vector<Vec2> two{{2.5, 2.5}, {5.5, 6.5}};
  EXPECT_EQ(knn_los_edges(two, g, 3, 10.0), (Pairs{{0, 1}}));
  // A at the bottom, B at the corner, C to the right; a wall cuts the
  // diagonal A-C but not the two legs.
  g.set({6, 6}, CellState::Occupied);
  g.set({5, 5}, CellState::Occupied);
  g.set({7, 7}, CellState::Occupied);
  const std::vector<Vec2> trio{{2.5, 2.5}, {2.5, 10.5}, {10.5, 10.5}};
  EXPECT_EQ(knn_los_edges(trio, g, 3, 20.0), (Pairs{{0, 1}, {1, 2}}));
  EXPECT_THROW(knn_los_edges(trio, g, 0, 20.0), std::invalid_argument);
}

TEST(Knn, MatchesAllPairsOracle) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 40; ++t) {
    const OccupancyGrid g = test::random_grid(40, 40, 0.12, rng, 0.5);
    const std::vector<Cell> free = test::cells_in(g, CellState::Free);
    std::vector<Vec2> pts;
    std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
    std::set<Cell> used;
    while (pts.size() < 40) {
      const Cell c = free[pick(rng)];
      if (used.insert(c).second) pts.push_back(g.cell_center(c));
    }
    const int k = 1 + t % 8;
    const double max_edge = 3.0 + t % 5;
    EXPECT_EQ(knn_los_edges(pts, g, k, max_edge), knn_oracle(pts, g, k, max_edge));
  }
}

TEST(LocalGraph, ExploredBoxHasNoUtility) {
  OccupancyGrid b(80, 80, 0.5, CellState::Occupied);
  for (int y = 1; y < 79; ++y)
    for (int x = 1; x < 79; ++x) b.set({x, y}, CellState::Free);
  const HierGraph g = build_local_graph(b, {20.25, 20.25}, GraphParams{});
  ASSERT_GT(g.size(), 1u);
  for (const auto& v : g.vertices()) EXPECT_EQ(v.utility, 0);
  EXPECT_EQ(g.vertex(0).pos, (Vec2{20.25, 20.25}));
  expect_edges_valid(g, b);
}

TEST(LocalGraph, StraightFrontierLine) {
  // Known Free columns 0..9, Unknown from column 10 on: column 9 is a
  // straight frontier of 41 cells.
  OccupancyGrid b(30, 41, 1.0);
  for (int y = 0; y < 41; ++y)
    for (int x = 0; x < 10; ++x) b.set({x, y}, CellState::Free);
  GraphParams p;
  p.sensor_range_m = 6.0;
  p.lattice_m = 4.0;
  const HierGraph g = build_local_graph(b, {8.5, 20.5}, p);
  int expect = 0;
  for (int y = 0; y < 41; ++y) {
    const double dx = 9 - 8, dy = y - 20;
    expect += dx * dx + dy * dy <= 36.0;
  }
  EXPECT_EQ(g.vertex(0).utility, expect);
}

TEST(LocalGraph, UtilitiesMatchBruteForceAndBoxClips) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Scene s = random_scene(seed);
    GraphParams p;
    p.sensor_range_m = 4.0;
    const HierGraph g = build_local_graph(s.belief, s.robot, p);
    const std::vector<Cell> frontier = extract_frontiers(s.belief);
    for (const auto& v : g.vertices()) {
      const Cell o = s.belief.world_to_cell(v.pos);
      EXPECT_TRUE(s.belief.in_bounds(o));
      EXPECT_EQ(s.belief.at(o), CellState::Free);
      EXPECT_LE(std::abs(v.pos.x - s.robot.x), p.box_half() + 1e-9);
      EXPECT_LE(std::abs(v.pos.y - s.robot.y), p.box_half() + 1e-9);
      int count = 0;
      for (const Cell& f : frontier) {
        const double dx = f.x - o.x, dy = f.y - o.y;
        if (dx * dx + dy * dy <= 64.0 && test::los_oracle(s.belief, o, f)) ++count;
      }
      EXPECT_EQ(v.utility, count);
    }
    expect_edges_valid(g, s.belief);
  }
}

TEST(LocalGraph, CornerRobot) {
  OccupancyGrid b(60, 60, 0.5, CellState::Free);
  const HierGraph g = build_local_graph(b, {0.25, 0.25}, GraphParams{});
  for (const auto& v : g.vertices()) {
    EXPECT_GE(v.pos.x, 0.0);
    EXPECT_GE(v.pos.y, 0.0);
  }
  EXPECT_THROW(build_local_graph(OccupancyGrid(30, 30, 0.5), {3.0, 3.0}, GraphParams{}),
               std::invalid_argument);
}

TEST(FrontierCenters, Trivial) {
  HierGraph g;
  g.add_vertex({0, 0}, Layer::Local);
  g.add_vertex({1, 0}, Layer::Local);
  EXPECT_TRUE(frontier_centers(g, 10.0).empty());
  g.vertex(0).utility = 3;
  g.vertex(1).utility = 5;
  g.add_vertex({30, 0}, Layer::Local, 1);
  const auto c = frontier_centers(g, 10.0);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].pos, (Vec2{1, 0}));
  EXPECT_EQ(c[1].pos, (Vec2{30, 0}));
}

TEST(FrontierCenters, CoverAndSeparation) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coord(0.0, 60.0);
  std::uniform_int_distribution<int> util(0, 6);
  for (int t = 0; t < 200; ++t) {
    HierGraph g;
    for (int i = 0; i < 80; ++i) g.add_vertex({coord(rng), coord(rng)}, Layer::Local, util(rng));
    const double r = 4.0 + t % 10;
    const auto centers = frontier_centers(g, r);
    for (const auto& v : g.vertices()) {
      if (v.utility == 0) continue;
      EXPECT_TRUE(std::any_of(centers.begin(), centers.end(),
                              [&](const FrontierCenter& c) { return distance(c.pos, v.pos) <= r; }));
    }
    for (std::size_t i = 0; i < centers.size(); ++i) {
      EXPECT_TRUE(g.find_at(centers[i].pos).has_value());
      for (std::size_t j = i + 1; j < centers.size(); ++j)
        EXPECT_GE(distance(centers[i].pos, centers[j].pos), r);
    }
  }
}

// 8-connected grid Dijkstra without corner cutting.
double grid_path_oracle(const OccupancyGrid& g, Cell s, Cell t) {
  auto free = [&](Cell c) { return g.in_bounds(c) && g.at(c) == CellState::Free; };
  std::vector<double> d(g.cell_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> q;
  d[g.index(s)] = 0.0;
  q.push({0.0, g.index(s)});
  while (!q.empty()) {
    const auto [du, u] = q.top();
    q.pop();
    if (du > d[u]) continue;
    const Cell c = g.cell_of_index(u);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell n{c.x + dx, c.y + dy};
        if ((dx == 0 && dy == 0) || !free(n)) continue;
        if (dx && dy && (!free({c.x + dx, c.y}) || !free({c.x, c.y + dy}))) continue;
        const double nd = du + ((dx && dy) ? std::sqrt(2.0) : 1.0);
        if (nd < d[g.index(n)]) {
          d[g.index(n)] = nd;
          q.push({nd, g.index(n)});
        }
      }
    }
  }
  return d[g.index(t)];
}

TEST(AStar, OptimalAgainstGridDijkstra) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const OccupancyGrid g = test::random_grid(35, 35, 0.25, rng, 0.5);
    const std::vector<Cell> free = test::cells_in(g, CellState::Free);
    std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
    const Cell a = free[pick(rng)], b = free[pick(rng)];
    const double oracle = grid_path_oracle(g, a, b);
    const std::vector<Cell> path = grid_astar(g, a, b);
    if (std::isinf(oracle)) {
      EXPECT_TRUE(path.empty());
      continue;
    }
    ASSERT_FALSE(path.empty());
    EXPECT_EQ(path.front(), a);
    EXPECT_EQ(path.back(), b);
    double len = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const int dx = std::abs(path[i].x - path[i - 1].x), dy = std::abs(path[i].y - path[i - 1].y);
      ASSERT_LE(std::max(dx, dy), 1);
      EXPECT_EQ(g.at(path[i]), CellState::Free);
      len += (dx && dy) ? std::sqrt(2.0) : 1.0;
    }
    EXPECT_NEAR(len, oracle, 1e-9);
  }
}

TEST(Extend, ZeroCentersAddsRobotOnly) {
  OccupancyGrid b(40, 40, 0.5, CellState::Free);
  HierGraph g;
  const ExtendReport r = extend_global_graph(g, {5.25, 5.25}, {}, b, GraphParams{});
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(r.added.size(), 1u);
  EXPECT_EQ(g.vertex(0).layer, Layer::Global);
}

TEST(Extend, StraightCorridor) {
  OccupancyGrid b(100, 20, 0.5, CellState::Occupied);
  for (int y = 8; y < 13; ++y)
    for (int x = 1; x < 99; ++x) b.set({x, y}, CellState::Free);
  HierGraph g;
  const Vec2 robot = b.cell_center({3, 10});
  const FrontierCenter c{b.cell_center({95, 10}), 5};
  const ExtendReport r = extend_global_graph(g, robot, std::span(&c, 1), b, GraphParams{});
  EXPECT_TRUE(r.unreachable.empty());
  for (const auto& v : g.vertices()) EXPECT_DOUBLE_EQ(v.pos.y, robot.y);
  const auto end = g.find_at(c.pos);
  ASSERT_TRUE(end.has_value());
  EXPECT_TRUE(g.vertex(*end).anchor);
  const ShortestPaths sp = dijkstra(g, r.robot_vertex);
  EXPECT_LE(sp.dist[*end], distance(robot, c.pos) + GraphParams{}.lattice_m);
  const std::size_t before = g.size();
  extend_global_graph(g, robot, std::span(&c, 1), b, GraphParams{});
  EXPECT_EQ(g.size(), before);
}

TEST(Extend, UnreachableCenterRecorded) {
  OccupancyGrid b(40, 20, 0.5, CellState::Free);
  for (int y = 0; y < 20; ++y) b.set({20, y}, CellState::Occupied);
  HierGraph g;
  const FrontierCenter c{b.cell_center({30, 5}), 1};
  const ExtendReport r = extend_global_graph(g, b.cell_center({5, 5}), std::span(&c, 1), b, GraphParams{});
  ASSERT_EQ(r.unreachable.size(), 1u);
  EXPECT_EQ(g.size(), 1u);
}

TEST(Extend, PathsConnectRobotToCenters) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scene s = random_scene(seed, seed % 2 ? MapKind::Corridor : MapKind::Simple, 80, 60);
    const GraphParams p;
    const HierGraph local = build_local_graph(s.belief, s.robot, p);
    const auto centers = frontier_centers(local, p.cluster_radius_m);
    HierGraph g;
    const ExtendReport r = extend_global_graph(g, s.robot, centers, s.belief, p);
    expect_edges_valid(g, s.belief);
    const ShortestPaths sp = dijkstra(g, r.robot_vertex);
    for (const auto& c : centers) {
      if (std::find(r.unreachable.begin(), r.unreachable.end(), c.pos) != r.unreachable.end()) continue;
      // The path end may have been folded into a vertex within half a
      // lattice spacing.
      const auto idx = g.nearest(c.pos);
      ASSERT_TRUE(idx.has_value());
      EXPECT_LT(distance(g.vertex(*idx).pos, c.pos), 0.5 * p.lattice_m);
      EXPECT_TRUE(sp.reachable(*idx)) << "seed " << seed;
    }
  }
}

HierGraph sparse_connected(const OccupancyGrid& grid, int n, std::mt19937_64& rng, const GraphParams& p) {
  return test::sparse_connected_graph(grid, n, rng, p);
}

using test::raw_union;

void check_merge_against_union(const HierGraph& out, const HierGraph& uni) {
  const test::UnionCheck c = test::compare_with_union(out, uni);
  EXPECT_EQ(c.unknown_vertices, 0u);
  EXPECT_EQ(c.relation_mismatches, 0u);
  EXPECT_LE(out.size(), uni.size());
}

TEST(Merge, IncomingEmptyKeepsComponents) {
  std::mt19937_64 rng(2);
  OccupancyGrid grid(80, 80, 0.5, CellState::Free);
  const GraphParams p;
  HierGraph mine = sparse_connected(grid, 30, rng, p);
  const HierGraph before = mine;
  merge_global_graphs(mine, HierGraph{}, grid, p, {});
  EXPECT_EQ(mine.component_count(), before.component_count());
  EXPECT_EQ(mine.size(), before.size());
}

TEST(Merge, MineEmptyGivesDownsampledIncoming) {
  std::mt19937_64 rng(3);
  OccupancyGrid grid(80, 80, 0.5, CellState::Free);
  const GraphParams p;
  const HierGraph incoming = test::random_geometric_graph(grid, 60, rng);
  HierGraph mine;
  merge_global_graphs(mine, incoming, grid, p, {});
  check_merge_against_union(mine, raw_union(HierGraph{}, incoming, grid, p));
  for (std::size_t i = 0; i < mine.size(); ++i)
    for (std::size_t j = i + 1; j < mine.size(); ++j)
      EXPECT_GT(distance(mine.vertex(i).pos, mine.vertex(j).pos), p.merge_radius_m);
}

TEST(Merge, RandomPairsOpenSpace) {
  std::mt19937_64 rng(4);
  OccupancyGrid grid(80, 80, 0.5, CellState::Free);
  const GraphParams p;
  for (int t = 0; t < 40; ++t) {
    const HierGraph mine0 = sparse_connected(grid, 50, rng, p);
    const HierGraph incoming = sparse_connected(grid, 50, rng, p);
    std::vector<Vec2> exempt{mine0.vertex(0).pos, incoming.vertex(incoming.size() / 2).pos};
    HierGraph mine = mine0;
    merge_global_graphs(mine, incoming, grid, p, exempt);
    check_merge_against_union(mine, raw_union(mine0, incoming, grid, p));
    for (const Vec2& e : exempt) EXPECT_TRUE(mine.find_at(e).has_value());
    EXPECT_EQ(test::close_pairs(mine, p.merge_radius_m, exempt), 0u);
    expect_edges_valid(mine, grid);
  }
}

TEST(Merge, RandomPairsWithObstaclesPreserveConnectivity) {
  std::mt19937_64 rng(5);
  const GraphParams p;
  for (int t = 0; t < 40; ++t) {
    const OccupancyGrid grid = generate_map(MapSpec::cells(MapKind::Simple, t, 80, 80));
    const HierGraph mine0 = test::random_geometric_graph(grid, 40, rng);
    const HierGraph incoming = test::random_geometric_graph(grid, 40, rng);
    HierGraph mine = mine0;
    merge_global_graphs(mine, incoming, grid, p, std::vector<Vec2>{mine0.vertex(0).pos});
    check_merge_against_union(mine, raw_union(mine0, incoming, grid, p));
    expect_edges_valid(mine, grid);
  }
}

TEST(Merge, Deterministic) {
  std::mt19937_64 rng(6);
  const OccupancyGrid grid = generate_map(MapSpec::cells(MapKind::Simple, 1, 80, 80));
  const HierGraph a = test::random_geometric_graph(grid, 40, rng);
  const HierGraph b = test::random_geometric_graph(grid, 40, rng);
  HierGraph m1 = a, m2 = a;
  merge_global_graphs(m1, b, grid, GraphParams{}, {});
  merge_global_graphs(m2, b, grid, GraphParams{}, {});
  EXPECT_EQ(m1.positions(), m2.positions());
  EXPECT_EQ(m1.edges().size(), m2.edges().size());
}

TEST(Prune, NoCentersKeepsRobots) {
  std::mt19937_64 rng(7);
  OccupancyGrid grid(60, 60, 0.5, CellState::Free);
  const HierGraph g = test::random_geometric_graph(grid, 40, rng);
  const std::vector<Vec2> robots{g.vertex(3).pos, g.vertex(17).pos};
  const HierGraph pr = prune_global_graph(g, robots, {});
  ASSERT_EQ(pr.size(), 2u);
  EXPECT_EQ(pr.edge_count(), 0u);
  EXPECT_THROW(prune_global_graph(g, std::vector<Vec2>{{-5.0, -5.0}}, {}), std::invalid_argument);
}

TEST(Prune, SinglePairIsOnePath) {
  std::mt19937_64 rng(8);
  OccupancyGrid grid(60, 60, 0.5, CellState::Free);
  const HierGraph g = test::random_geometric_graph(grid, 50, rng);
  const std::vector<Vec2> robot{g.vertex(0).pos};
  const std::vector<Vec2> center{g.vertex(49).pos};
  const HierGraph pr = prune_global_graph(g, robot, center);
  EXPECT_EQ(pr.edge_count() + 1, pr.size());
  int leaves = 0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    EXPECT_LE(pr.neighbors(i).size(), 2u);
    leaves += pr.neighbors(i).size() == 1;
  }
  EXPECT_EQ(leaves, pr.size() > 1 ? 2 : 0);
  const auto d0 = test::dijkstra_oracle(g, 0);
  const auto d1 = test::dijkstra_oracle(pr, *pr.find_at(robot[0]));
  EXPECT_EQ(d1[*pr.find_at(center[0])], d0[49]);
}

TEST(Prune, PreservesAllRobotCenterDistances) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const OccupancyGrid grid = generate_map(MapSpec::cells(MapKind::Simple, t, 70, 70));
    const HierGraph g = test::random_geometric_graph(grid, 30 + t * 3, rng);
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    std::vector<Vec2> robots, centers;
    for (int i = 0; i < 3; ++i) robots.push_back(g.vertex(pick(rng)).pos);
    for (int i = 0; i < 5; ++i) centers.push_back(g.vertex(pick(rng)).pos);
    const HierGraph pr = prune_global_graph(g, robots, centers);
    for (const Vec2& r : robots) {
      const auto before = test::dijkstra_oracle(g, *g.find_at(r));
      const auto after = test::dijkstra_oracle(pr, *pr.find_at(r));
      for (const Vec2& c : centers) {
        const double b = before[*g.find_at(c)];
        if (std::isinf(b)) continue;
        ASSERT_TRUE(pr.find_at(c).has_value());
        EXPECT_EQ(after[*pr.find_at(c)], b);
      }
    }
  }
}

TEST(Planning, EmptyGlobalIsLocal) {
  const Scene s = random_scene(3);
  const GraphParams p;
  const FrontierIndex fi(s.belief, p.sensor_range_m);
  const HierGraph local = build_local_graph(s.belief, s.robot, p, fi);
  const HierGraph plan = planning_graph(HierGraph{}, local, s.belief, p, fi);
  EXPECT_EQ(plan.positions(), local.positions());
  EXPECT_EQ(plan.edge_count(), local.edge_count());
}

TEST(Planning, DuplicateTakesLocalUtility) {
  OccupancyGrid b(40, 40, 0.5, CellState::Free);
  const GraphParams p;
  const FrontierIndex fi(b, p.sensor_range_m);
  HierGraph local, global;
  local.add_vertex({5.25, 5.25}, Layer::Local, 7);
  global.add_vertex({5.25, 5.25}, Layer::Global, 2);
  global.add_vertex({12.25, 5.25}, Layer::Global, 2);
  global.add_edge(0, 1);
  const HierGraph plan = planning_graph(global, local, b, p, fi);
  ASSERT_EQ(plan.size(), 2u);
  EXPECT_EQ(plan.vertex(0).utility, 7);
  EXPECT_EQ(plan.vertex(1).utility, 0);
  EXPECT_TRUE(plan.has_edge(0, 1));
}

TEST(Planning, RobotReachesEveryCenter) {
  int checked = 0;
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const Scene s = random_scene(seed, seed % 3 ? MapKind::Simple : MapKind::Corridor, 80, 60);
    const GraphParams p;
    const FrontierIndex fi(s.belief, p.sensor_range_m);
    const HierGraph local = build_local_graph(s.belief, s.robot, p, fi);
    const auto centers = frontier_centers(local, p.cluster_radius_m);
    HierGraph global;
    extend_global_graph(global, s.robot, centers, s.belief, p);
    const HierGraph plan = planning_graph(global, local, s.belief, p, fi);
    expect_edges_valid(plan, s.belief);
    const auto d = test::dijkstra_oracle(plan, *plan.find_at(s.belief.snap(s.robot)));
    for (const auto& c : centers) {
      const Cell from = s.belief.world_to_cell(s.robot), to = s.belief.world_to_cell(c.pos);
      if (grid_astar(s.belief, from, to).empty()) continue;
      ++checked;
      EXPECT_FALSE(std::isinf(d[*plan.find_at(c.pos)])) << "seed " << seed;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(GraphIO, RoundTrip) {
  std::mt19937_64 rng(10);
  OccupancyGrid grid(60, 60, 0.5, CellState::Free);
  HierGraph g = test::random_geometric_graph(grid, 25, rng);
  g.vertex(2).utility = 4;
  g.vertex(3).layer = Layer::Local;
  std::stringstream ss;
  write_graph_jsonl(ss, g);
  const HierGraph back = read_graph_jsonl(ss);
  EXPECT_EQ(back.positions(), g.positions());
  ASSERT_EQ(back.edges().size(), g.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    EXPECT_EQ(back.edges()[i].a, g.edges()[i].a);
    EXPECT_EQ(back.edges()[i].b, g.edges()[i].b);
    EXPECT_DOUBLE_EQ(back.edges()[i].length, g.edges()[i].length);
  }
  EXPECT_EQ(back.vertex(2).utility, 4);
  EXPECT_EQ(back.vertex(3).layer, Layer::Local);
}

TEST(Dijkstra, MatchesOracle) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const OccupancyGrid grid = generate_map(MapSpec::cells(MapKind::Simple, t, 60, 60));
    const HierGraph g = test::random_geometric_graph(grid, 60, rng);
    const ShortestPaths sp = dijkstra(g, 0);
    const auto oracle = test::dijkstra_oracle(g, 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
      EXPECT_EQ(sp.dist[v], oracle[v]);
      if (!sp.reachable(v)) continue;
      const auto path = sp.path_to(v);
      EXPECT_EQ(path.front(), 0u);
      EXPECT_EQ(path.back(), v);
    }
  }
}

}  // namespace
}  // namespace mrx
