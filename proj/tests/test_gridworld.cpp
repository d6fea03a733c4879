#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "mrx/map_io.hpp"
#include "mrx/mapgen.hpp"
#include "mrx/raycast.hpp"
#include "mrx/sensing.hpp"
#include "support.hpp"

namespace mrx {
namespace {

using test::cells_in;

// BFS over 4-neighbours from the first Free cell.
int flood_components(const OccupancyGrid& g) {
  std::vector<bool> seen(g.cell_count(), false);
  int comps = 0;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (seen[i] || g.at_index(i) != CellState::Free) continue;
    ++comps;
    std::deque<Cell> q{g.cell_of_index(i)};
    seen[i] = true;
    while (!q.empty()) {
      const Cell c = q.front();
      q.pop_front();
      for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
        const Cell n{c.x + d.x, c.y + d.y};
        if (!g.in_bounds(n) || g.at(n) != CellState::Free || seen[g.index(n)]) continue;
        seen[g.index(n)] = true;
        q.push_back(n);
      }
    }
  }
  return comps;
}

bool border_occupied(const OccupancyGrid& g) {
  for (int x = 0; x < g.width(); ++x) {
    if (g.at({x, 0}) != CellState::Occupied || g.at({x, g.height() - 1}) != CellState::Occupied)
      return false;
  }
  for (int y = 0; y < g.height(); ++y) {
    if (g.at({0, y}) != CellState::Occupied || g.at({g.width() - 1, y}) != CellState::Occupied)
      return false;
  }
  return true;
}

TEST(Grid, WorldCellRoundTrip) {
  OccupancyGrid g(10, 8, 0.5);
  EXPECT_EQ(g.world_to_cell({0.74, 1.2}), (Cell{1, 2}));
  EXPECT_EQ(g.cell_center({3, 4}), (Vec2{1.75, 2.25}));
  EXPECT_EQ(g.count(CellState::Unknown), 80u);
  EXPECT_THROW(OccupancyGrid(0, 3, 0.5), std::invalid_argument);
}

TEST(MapGen, CorridorDefaultDimensions) {
  MapSpec spec;
  spec.kind = MapKind::Corridor;
  spec.seed = 7;
  const OccupancyGrid g = generate_map(spec);
  EXPECT_EQ(g.width(), 320);
  EXPECT_EQ(g.height(), 240);
  EXPECT_EQ(flood_components(g), 1);
}

TEST(MapGen, EmptyIsOpenInterior) {
  const OccupancyGrid g = generate_map(MapSpec::cells(MapKind::Empty, 0, 20, 20));
  EXPECT_TRUE(border_occupied(g));
  for (int y = 1; y < 19; ++y)
    for (int x = 1; x < 19; ++x) EXPECT_EQ(g.at({x, y}), CellState::Free);
}

TEST(MapGen, ComplexSingleComponent) {
  MapSpec spec;
  spec.kind = MapKind::Complex;
  spec.seed = 3;
  const OccupancyGrid g = generate_map(spec);
  EXPECT_EQ(flood_components(g), 1);
  EXPECT_EQ(free_component_count(g), 1);
}

TEST(MapGen, TooSmallRejected) {
  EXPECT_THROW(generate_map(MapSpec::cells(MapKind::Simple, 0, 19, 40)), ConfigError);
  EXPECT_THROW(generate_map(MapSpec::cells(MapKind::Corridor, 0, 40, 10)), ConfigError);
  EXPECT_THROW(parse_map_kind("volcano"), std::invalid_argument);
}

// Every Free cell sits in a fully Free 3x3 block: halls are at least three
// cells wide everywhere.
bool wide_everywhere(const OccupancyGrid& g) {
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (g.at({x, y}) != CellState::Free) continue;
      bool ok = false;
      for (int oy = -2; oy <= 0 && !ok; ++oy) {
        for (int ox = -2; ox <= 0 && !ok; ++ox) {
          bool block = true;
          for (int j = 0; j < 3 && block; ++j)
            for (int i = 0; i < 3 && block; ++i)
              block = g.at_or_wall({x + ox + i, y + oy + j}) == CellState::Free;
          ok = block;
        }
      }
      if (!ok) return false;
    }
  }
  return true;
}

TEST(MapGen, PropertiesAcrossKindsAndSeeds) {
  for (MapKind kind :
       {MapKind::Empty, MapKind::Simple, MapKind::Corridor, MapKind::Hybrid, MapKind::Complex}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const MapSpec spec = MapSpec::cells(kind, seed, 80, 60);
      const OccupancyGrid g = generate_map(spec);
      SCOPED_TRACE(std::string(to_string(kind)) + " seed " + std::to_string(seed));
      EXPECT_EQ(g.count(CellState::Unknown), 0u);
      EXPECT_TRUE(border_occupied(g));
      EXPECT_EQ(flood_components(g), 1);
      EXPECT_TRUE(wide_everywhere(g));
      EXPECT_EQ(g, generate_map(spec));
    }
  }
}

TEST(MapGen, SeedsDiffer) {
  EXPECT_NE(generate_map(MapSpec::cells(MapKind::Corridor, 1, 80, 60)),
            generate_map(MapSpec::cells(MapKind::Corridor, 2, 80, 60)));
}

TEST(Raycast, TraversalMatchesExactIntersection) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-12, 12);
  for (int trial = 0; trial < 3000; ++trial) {
    const Cell a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    std::set<Cell> oracle;
    for (int y = std::min(a.y, b.y); y <= std::max(a.y, b.y); ++y)
      for (int x = std::min(a.x, b.x); x <= std::max(a.x, b.x); ++x)
        if (test::segment_touches_cell(a, b, {x, y})) oracle.insert({x, y});
    const std::vector<Cell> got = segment_cells(a, b);
    EXPECT_EQ(std::set<Cell>(got.begin(), got.end()), oracle);
    EXPECT_EQ(got.front(), a);
    EXPECT_EQ(got.back(), b);
  }
}

TEST(Raycast, SymmetricLineOfSight) {
  std::mt19937_64 rng(5);
  for (int m = 0; m < 20; ++m) {
    const OccupancyGrid g = test::random_grid(25, 25, 0.15, rng);
    std::uniform_int_distribution<int> c(0, 24);
    for (int i = 0; i < 200; ++i) {
      const Cell a{c(rng), c(rng)}, b{c(rng), c(rng)};
      EXPECT_EQ(line_of_sight(g, a, b), test::los_oracle(g, a, b));
      EXPECT_EQ(line_of_sight(g, a, b), line_of_sight(g, b, a));
    }
  }
}

// Sub-cell supersampling at 0.1-cell steps can only miss cells a segment
// grazes, so every sampled cell must be in the exact traversal.
TEST(Raycast, SupersampledCellsAreTraversed) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> coord(0, 30);
  for (int trial = 0; trial < 500; ++trial) {
    const Cell a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    const std::vector<Cell> exact = segment_cells(a, b);
    const std::set<Cell> exact_set(exact.begin(), exact.end());
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int n = std::max(1, static_cast<int>(std::ceil(len / 0.1)));
    for (int s = 0; s <= n; ++s) {
      const double t = static_cast<double>(s) / n;
      const double x = a.x + 0.5 + t * (b.x - a.x), y = a.y + 0.5 + t * (b.y - a.y);
      EXPECT_TRUE(exact_set.count({static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))}));
    }
  }
}

TEST(Raycast, WallCount) {
  OccupancyGrid g(20, 5, 1.0, CellState::Free);
  g.set({5, 2}, CellState::Occupied);
  g.set({6, 2}, CellState::Occupied);
  g.set({12, 2}, CellState::Occupied);
  EXPECT_EQ(occupied_cells_on_segment(g, {1.5, 2.5}, {18.5, 2.5}), 3);
  EXPECT_EQ(occupied_cells_on_segment(g, {1.5, 0.5}, {18.5, 0.5}), 0);
}

TEST(Lidar, EmptyDisk) {
  OccupancyGrid g(41, 41, 1.0, CellState::Free);
  const CellUpdates scan = lidar_scan(g, g.cell_center({20, 20}), {10.0, 360});
  std::set<Cell> got;
  for (const CellUpdate& u : scan) {
    got.insert(u.cell);
    EXPECT_EQ(u.state, CellState::Free);
  }
  std::set<Cell> expect;
  for (int y = 0; y < 41; ++y)
    for (int x = 0; x < 41; ++x)
      if ((x - 20) * (x - 20) + (y - 20) * (y - 20) <= 100) expect.insert({x, y});
  EXPECT_EQ(got, expect);
}

TEST(Lidar, WallOccludes) {
  OccupancyGrid g(30, 30, 1.0, CellState::Free);
  g.set({15, 10}, CellState::Occupied);
  const CellUpdates scan = lidar_scan(g, g.cell_center({10, 10}), {10.0, 360});
  auto has = [&](Cell c) {
    return std::any_of(scan.begin(), scan.end(), [&](const CellUpdate& u) { return u.cell == c; });
  };
  EXPECT_TRUE(has({15, 10}));
  EXPECT_FALSE(has({18, 10}));
  EXPECT_TRUE(has({14, 10}));
}

TEST(Lidar, BruteForceOracleAndSoundness) {
  std::mt19937_64 rng(21);
  for (int m = 0; m < 30; ++m) {
    const OccupancyGrid g = test::random_grid(30, 30, 0.2, rng, 0.5);
    const std::vector<Cell> free = cells_in(g, CellState::Free);
    const Cell origin = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
    const double range_m = 2.0 + 6.0 * std::uniform_real_distribution<double>()(rng);
    const CellUpdates scan = lidar_scan(g, g.cell_center(origin), {range_m, 360});
    std::vector<Cell> got;
    for (const CellUpdate& u : scan) {
      got.push_back(u.cell);
      EXPECT_EQ(u.state, g.at(u.cell));
    }
    std::vector<Cell> expect = test::visibility_oracle(g, origin, range_m / 0.5);
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(got, expect);
  }
}

TEST(Lidar, Errors) {
  OccupancyGrid g(10, 10, 1.0, CellState::Free);
  g.set({2, 2}, CellState::Occupied);
  EXPECT_THROW(lidar_scan(g, {2.5, 2.5}, {}), InvalidPose);
  EXPECT_THROW(lidar_scan(g, {-1.0, 2.5}, {}), InvalidPose);
  EXPECT_THROW((SensorSpec{0.0, 360}.validate()), std::invalid_argument);
  EXPECT_THROW((SensorSpec{5.0, 3}.validate()), std::invalid_argument);
}

TEST(Integrate, IdentityIdempotenceAndNoRevert) {
  const OccupancyGrid truth = generate_map(MapSpec::cells(MapKind::Simple, 4, 30, 30));
  const OccupancyGrid empty(30, 30, 0.5);
  EXPECT_EQ(integrate_scan(empty, {}), empty);
  const std::vector<Cell> free = cells_in(truth, CellState::Free);
  const CellUpdates scan = lidar_scan(truth, truth.cell_center(free[free.size() / 2]), {4.0, 360});
  const OccupancyGrid once = integrate_scan(empty, scan);
  EXPECT_EQ(integrate_scan(once, scan), once);
  EXPECT_GT(once.known_count(), 0u);
  const OccupancyGrid other = integrate_scan(once, lidar_scan(truth, truth.cell_center(free.front()), {4.0, 360}));
  for (std::size_t i = 0; i < once.cell_count(); ++i)
    if (is_known(once.at_index(i))) {
      EXPECT_TRUE(is_known(other.at_index(i)));
    }
  EXPECT_THROW(integrate_scan(OccupancyGrid(10, 10, 0.5), scan), GeometryMismatch);
}

TEST(Integrate, NewerObservationWins) {
  OccupancyGrid b(5, 5, 1.0);
  b = integrate_scan(b, {{{1, 1}, CellState::Free}});
  b = integrate_scan(b, {{{1, 1}, CellState::Occupied}});
  EXPECT_EQ(b.at({1, 1}), CellState::Occupied);
}

TEST(Integrate, ExhaustiveCoverageRecoversTruth) {
  const OccupancyGrid truth = generate_map(MapSpec::cells(MapKind::Simple, 9, 24, 24));
  OccupancyGrid belief(24, 24, 0.5);
  for (const Cell& c : cells_in(truth, CellState::Free))
    belief = integrate_scan(belief, lidar_scan(truth, truth.cell_center(c), {3.0, 360}));
  // Walls are only guaranteed visible from a 4-adjacent Free cell; a wall
  // touching free space only diagonally can be hidden behind its neighbours.
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 24; ++x) {
      bool touches_free = truth.at({x, y}) == CellState::Free;
      for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}})
        touches_free |= truth.at_or_wall({x + d.x, y + d.y}) == CellState::Free;
      if (touches_free) {
        EXPECT_EQ(belief.at({x, y}), truth.at({x, y})) << x << "," << y;
      }
    }
  }
  EXPECT_DOUBLE_EQ(coverage_fraction(belief, truth), 1.0);
}

bool frontier_predicate(const OccupancyGrid& b, Cell c) {
  if (b.at(c) != CellState::Free) return false;
  for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
    const Cell n{c.x + d.x, c.y + d.y};
    if (b.in_bounds(n) && b.at(n) == CellState::Unknown) return true;
  }
  return false;
}

TEST(Frontiers, BruteForcePredicate) {
  std::mt19937_64 rng(3);
  std::discrete_distribution<int> state{3, 5, 2};
  for (int m = 0; m < 100; ++m) {
    OccupancyGrid b(17 + m % 9, 13 + m % 7, 0.5);
    for (std::size_t i = 0; i < b.cell_count(); ++i) b.set_index(i, static_cast<CellState>(state(rng)));
    std::vector<Cell> expect;
    for (int y = 0; y < b.height(); ++y)
      for (int x = 0; x < b.width(); ++x)
        if (frontier_predicate(b, {x, y})) expect.push_back({x, y});
    std::vector<Cell> got = extract_frontiers(b);
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(got, expect);
  }
}

TEST(Frontiers, Trivial) {
  OccupancyGrid full(10, 10, 1.0, CellState::Free);
  EXPECT_TRUE(extract_frontiers(full).empty());
  EXPECT_TRUE(extract_frontiers(OccupancyGrid(10, 10, 1.0)).empty());
  OccupancyGrid walls(10, 10, 1.0);
  walls.set({3, 3}, CellState::Occupied);
  EXPECT_TRUE(extract_frontiers(walls).empty());
}

TEST(Frontiers, SensedDiskRing) {
  OccupancyGrid truth(41, 41, 1.0, CellState::Free);
  const OccupancyGrid b = integrate_scan(OccupancyGrid(41, 41, 1.0),
                                         lidar_scan(truth, {20.5, 20.5}, {8.0, 360}));
  for (const Cell& c : extract_frontiers(b)) {
    const int d2 = (c.x - 20) * (c.x - 20) + (c.y - 20) * (c.y - 20);
    EXPECT_LE(d2, 64);
    EXPECT_GT(d2, 36);
  }
  EXPECT_FALSE(extract_frontiers(b).empty());
}

TEST(Coverage, Fractions) {
  OccupancyGrid truth(12, 12, 1.0, CellState::Occupied);
  int n = 0;
  for (int y = 1; y < 11 && n < 100; ++y)
    for (int x = 1; x < 11 && n < 100; ++x, ++n) truth.set({x, y}, CellState::Free);
  ASSERT_EQ(truth.count(CellState::Free), 100u);
  EXPECT_DOUBLE_EQ(coverage_fraction(truth, truth), 1.0);
  EXPECT_DOUBLE_EQ(coverage_fraction(OccupancyGrid(12, 12, 1.0), truth), 0.0);
  OccupancyGrid b = truth;
  b.set({1, 1}, CellState::Unknown);
  EXPECT_DOUBLE_EQ(coverage_fraction(b, truth), 0.99);
  EXPECT_TRUE(meets_coverage(covered_free_cells(b, truth), 100));
  b.set({2, 1}, CellState::Unknown);
  EXPECT_FALSE(meets_coverage(covered_free_cells(b, truth), 100));
  EXPECT_THROW(coverage_fraction(b, OccupancyGrid(12, 12, 1.0, CellState::Occupied)),
               std::invalid_argument);
}

TEST(BeliefMap, MergeLaws) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> st(0, 2), stamp(0, 4);
  auto random_belief = [&] {
    BeliefMap m(9, 7, 1.0);
    CellUpdates ups;
    for (int s = 0; s < 5; ++s) {
      ups.clear();
      for (int i = 0; i < 12; ++i) {
        const CellState c = static_cast<CellState>(st(rng));
        if (c != CellState::Unknown) ups.push_back({{static_cast<int>(rng() % 9), static_cast<int>(rng() % 7)}, c});
      }
      m.integrate(ups, stamp(rng));
    }
    return m;
  };
  for (int t = 0; t < 200; ++t) {
    const BeliefMap a = random_belief(), b = random_belief(), c = random_belief();
    BeliefMap ab = a, ba = b;
    ab.merge_from(b);
    ba.merge_from(a);
    EXPECT_EQ(ab.grid(), ba.grid());
    BeliefMap aa = a;
    EXPECT_EQ(aa.merge_from(a), 0u);
    EXPECT_EQ(aa, a);
    BeliefMap l = ab, r = b;
    l.merge_from(c);
    r.merge_from(c);
    BeliefMap r2 = a;
    r2.merge_from(r);
    EXPECT_EQ(l.grid(), r2.grid());
    EXPECT_EQ(ab.known_count(), ab.grid().known_count());
    EXPECT_EQ(ab.free_count(), ab.grid().count(CellState::Free));
  }
}

TEST(MapIO, RoundTripAndErrors) {
  const OccupancyGrid g = generate_map(MapSpec::cells(MapKind::Hybrid, 2, 40, 30));
  std::stringstream ss;
  write_map(ss, g);
  EXPECT_EQ(read_map(ss), g);
  OccupancyGrid b(3, 2, 0.5);
  b.set({1, 0}, CellState::Free);
  std::stringstream s2;
  write_map(s2, b);
  EXPECT_EQ(s2.str(), "3 2 0.5\n?.?\n???\n");
  for (const char* bad : {"", "3 x 1\n", "2 2 1\n..\n", "2 2 1\n..\n.\n", "2 2 1\n..\n.z\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_map(in), MapFormatError) << bad;
  }
  EXPECT_THROW(load_map("/nonexistent/x.map"), MapFormatError);
}

}  // namespace
}  // namespace mrx
