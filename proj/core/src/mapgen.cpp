#include "mrx/mapgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <queue>
#include <random>
#include <vector>

namespace mrx {
namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

void fill_rect(OccupancyGrid& g, int x0, int y0, int x1, int y1, CellState s) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, g.width());
  y1 = std::min(y1, g.height());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) g.set({x, y}, s);
  }
}

void seal_border(OccupancyGrid& g) {
  for (int x = 0; x < g.width(); ++x) {
    g.set({x, 0}, CellState::Occupied);
    g.set({x, g.height() - 1}, CellState::Occupied);
  }
  for (int y = 0; y < g.height(); ++y) {
    g.set({0, y}, CellState::Occupied);
    g.set({g.width() - 1, y}, CellState::Occupied);
  }
}

/// Returns component labels (-1 for non-Free) and the per-label sizes.
std::vector<int> label_free_components(const OccupancyGrid& g,
                                       std::vector<std::size_t>* sizes) {
  std::vector<int> label(g.cell_count(), -1);
  std::vector<std::size_t> counts;
  std::queue<std::size_t> q;
  for (std::size_t seed = 0; seed < g.cell_count(); ++seed) {
    if (g.at_index(seed) != CellState::Free || label[seed] >= 0) continue;
    const int id = static_cast<int>(counts.size());
    counts.push_back(0);
    label[seed] = id;
    q.push(seed);
    while (!q.empty()) {
      const std::size_t i = q.front();
      q.pop();
      ++counts.back();
      const Cell c = g.cell_of_index(i);
      const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
      for (const Cell n : nbrs) {
        if (!g.in_bounds(n)) continue;
        const std::size_t j = g.index(n);
        if (g.at_index(j) == CellState::Free && label[j] < 0) {
          label[j] = id;
          q.push(j);
        }
      }
    }
  }
  if (sizes) *sizes = std::move(counts);
  return label;
}

/// Every Free cell not covered by some fully Free 3x3 block becomes Occupied.
void open_three_by_three(OccupancyGrid& g) {
  const int w = g.width();
  const int h = g.height();
  std::vector<char> covered(g.cell_count(), 0);
  for (int y = 0; y + 3 <= h; ++y) {
    for (int x = 0; x + 3 <= w; ++x) {
      bool all_free = true;
      for (int dy = 0; dy < 3 && all_free; ++dy) {
        for (int dx = 0; dx < 3 && all_free; ++dx) {
          all_free = g.at({x + dx, y + dy}) == CellState::Free;
        }
      }
      if (!all_free) continue;
      for (int dy = 0; dy < 3; ++dy) {
        for (int dx = 0; dx < 3; ++dx) covered[g.index({x + dx, y + dy})] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (g.at_index(i) == CellState::Free && !covered[i]) {
      g.set_index(i, CellState::Occupied);
    }
  }
}

void keep_largest_component(OccupancyGrid& g) {
  std::vector<std::size_t> sizes;
  const auto label = label_free_components(g, &sizes);
  if (sizes.empty()) return;
  const int keep = static_cast<int>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (label[i] >= 0 && label[i] != keep) g.set_index(i, CellState::Occupied);
  }
}

void finalize(OccupancyGrid& g) {
  seal_border(g);
  open_three_by_three(g);
  keep_largest_component(g);
}

/// Scatters axis-aligned rectangular obstacles inside [x0,x1)x[y0,y1).
void scatter_obstacles(OccupancyGrid& g, Rng& rng, int x0, int y0, int x1, int y1,
                       double density) {
  const int w = x1 - x0;
  const int h = y1 - y0;
  if (w < 6 || h < 6) return;
  const double per_cell = g.resolution() * g.resolution();
  const int max_side = std::max(2, static_cast<int>(std::lround(6.0 / g.resolution())));
  const int min_side = std::max(2, static_cast<int>(std::lround(1.5 / g.resolution())));
  const int count = static_cast<int>(density * w * h * per_cell / 36.0) + 1;
  for (int n = 0; n < count; ++n) {
    const int ow = uniform(rng, min_side, std::max(min_side, std::min(max_side, w / 3)));
    const int oh = uniform(rng, min_side, std::max(min_side, std::min(max_side, h / 3)));
    const int ox = uniform(rng, x0, std::max(x0, x1 - ow));
    const int oy = uniform(rng, y0, std::max(y0, y1 - oh));
    fill_rect(g, ox, oy, ox + ow, oy + oh, CellState::Occupied);
  }
}

struct MazeLayout {
  int hall = 0;
  int wall = 0;
  int cols = 0;
  int rows = 0;
  int ox = 0;
  int oy = 0;

  int pitch() const { return hall + wall; }
  int chamber_x(int i) const { return ox + wall + i * pitch(); }
  int chamber_y(int j) const { return oy + wall + j * pitch(); }
};

/// Recursive-division maze over a lattice of square chambers, carved into an
/// all-Occupied grid. `loop_p` reopens that fraction of closed passages.
MazeLayout carve_maze(OccupancyGrid& g, Rng& rng, const MapSpec& spec, double loop_p) {
  MazeLayout m;
  m.hall = std::max(3, static_cast<int>(std::lround(spec.hall_m / spec.resolution)));
  m.wall = std::max(1, static_cast<int>(std::lround(spec.wall_m / spec.resolution)));
  // Shrink halls until at least one chamber fits inside the border.
  while (m.hall > 3 && (g.width() - 2 * m.wall) / m.pitch() < 1) --m.hall;
  while (m.hall > 3 && (g.height() - 2 * m.wall) / m.pitch() < 1) --m.hall;
  m.cols = std::max(1, (g.width() - m.wall) / m.pitch());
  m.rows = std::max(1, (g.height() - m.wall) / m.pitch());
  m.ox = (g.width() - (m.cols * m.pitch() + m.wall)) / 2;
  m.oy = (g.height() - (m.rows * m.pitch() + m.wall)) / 2;

  // east[i][j]: passage between (i,j) and (i+1,j); north[i][j]: (i,j)-(i,j+1).
  std::vector<std::vector<char>> east(m.cols, std::vector<char>(m.rows, 1));
  std::vector<std::vector<char>> north(m.cols, std::vector<char>(m.rows, 1));

  struct Region {
    int x, y, w, h;
  };
  std::vector<Region> stack{{0, 0, m.cols, m.rows}};
  while (!stack.empty()) {
    const Region r = stack.back();
    stack.pop_back();
    if (r.w < 2 && r.h < 2) continue;
    bool vertical_wall = r.w > r.h;
    if (r.w == r.h) vertical_wall = chance(rng, 0.5);
    if (r.w < 2) vertical_wall = false;
    if (r.h < 2) vertical_wall = true;
    if (vertical_wall) {
      const int c = uniform(rng, r.x, r.x + r.w - 2);
      const int gap = uniform(rng, r.y, r.y + r.h - 1);
      for (int j = r.y; j < r.y + r.h; ++j) east[c][j] = (j == gap);
      stack.push_back({r.x, r.y, c - r.x + 1, r.h});
      stack.push_back({c + 1, r.y, r.x + r.w - c - 1, r.h});
    } else {
      const int rr = uniform(rng, r.y, r.y + r.h - 2);
      const int gap = uniform(rng, r.x, r.x + r.w - 1);
      for (int i = r.x; i < r.x + r.w; ++i) north[i][rr] = (i == gap);
      stack.push_back({r.x, r.y, r.w, rr - r.y + 1});
      stack.push_back({r.x, rr + 1, r.w, r.y + r.h - rr - 1});
    }
  }

  for (int i = 0; i < m.cols; ++i) {
    for (int j = 0; j < m.rows; ++j) {
      if (i + 1 < m.cols && !east[i][j] && chance(rng, loop_p)) east[i][j] = 1;
      if (j + 1 < m.rows && !north[i][j] && chance(rng, loop_p)) north[i][j] = 1;
    }
  }

  for (int i = 0; i < m.cols; ++i) {
    for (int j = 0; j < m.rows; ++j) {
      const int x = m.chamber_x(i);
      const int y = m.chamber_y(j);
      fill_rect(g, x, y, x + m.hall, y + m.hall, CellState::Free);
      if (i + 1 < m.cols && east[i][j]) {
        fill_rect(g, x + m.hall, y, x + m.pitch(), y + m.hall, CellState::Free);
      }
      if (j + 1 < m.rows && north[i][j]) {
        fill_rect(g, x, y + m.hall, x + m.hall, y + m.pitch(), CellState::Free);
      }
    }
  }
  return m;
}

/// Clears an open room snapped to the chamber lattice and scatters obstacles
/// inside it, leaving a hall-wide clear margin along its edge.
void open_room(OccupancyGrid& g, Rng& rng, const MazeLayout& m, int i0, int j0,
               int i1, int j1, double density) {
  const int x0 = m.chamber_x(i0);
  const int y0 = m.chamber_y(j0);
  const int x1 = m.chamber_x(i1 - 1) + m.hall;
  const int y1 = m.chamber_y(j1 - 1) + m.hall;
  fill_rect(g, x0, y0, x1, y1, CellState::Free);
  scatter_obstacles(g, rng, x0 + m.hall, y0 + m.hall, x1 - m.hall, y1 - m.hall, density);
}

}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Empty: return "empty";
    case MapKind::Simple: return "simple";
    case MapKind::Corridor: return "corridor";
    case MapKind::Hybrid: return "hybrid";
    case MapKind::Complex: return "complex";
  }
  return "unknown";
}

MapKind parse_map_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (MapKind k : {MapKind::Empty, MapKind::Simple, MapKind::Corridor, MapKind::Hybrid,
                    MapKind::Complex}) {
    if (lower == to_string(k)) return k;
  }
  throw ConfigError("unknown map kind: " + std::string(name));
}

MapSpec MapSpec::cells(MapKind kind, std::uint64_t seed, int width, int height,
                       double resolution) {
  MapSpec s;
  s.kind = kind;
  s.seed = seed;
  s.resolution = resolution;
  s.width_m = width * resolution;
  s.height_m = height * resolution;
  return s;
}

double MapSpec::default_width_m() const {
  switch (kind) {
    case MapKind::Corridor: return 160.0;
    case MapKind::Hybrid: return 125.0;
    case MapKind::Complex: return 250.0;
    default: return 40.0;
  }
}

double MapSpec::default_height_m() const {
  switch (kind) {
    case MapKind::Corridor: return 120.0;
    case MapKind::Hybrid: return 125.0;
    case MapKind::Complex: return 250.0;
    default: return 40.0;
  }
}

int MapSpec::width_cells() const {
  return static_cast<int>(std::lround(width_m.value_or(default_width_m()) / resolution));
}

int MapSpec::height_cells() const {
  return static_cast<int>(std::lround(height_m.value_or(default_height_m()) / resolution));
}

OccupancyGrid generate_map(const MapSpec& spec) {
  if (!(spec.resolution > 0.0) || !std::isfinite(spec.resolution)) {
    throw ConfigError("generate_map: resolution must be positive");
  }
  const int w = spec.width_cells();
  const int h = spec.height_cells();
  if (w < kMinMapCells || h < kMinMapCells) {
    throw ConfigError("generate_map: map must be at least 20x20 cells, got " +
                      std::to_string(w) + "x" + std::to_string(h));
  }
  Rng rng(spec.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(spec.kind) + 1);

  switch (spec.kind) {
    case MapKind::Empty: {
      OccupancyGrid g(w, h, spec.resolution, CellState::Free);
      seal_border(g);
      return g;
    }
    case MapKind::Simple: {
      OccupancyGrid g(w, h, spec.resolution, CellState::Free);
      scatter_obstacles(g, rng, 1, 1, w - 1, h - 1, 0.35);
      finalize(g);
      return g;
    }
    case MapKind::Corridor: {
      OccupancyGrid g(w, h, spec.resolution, CellState::Occupied);
      carve_maze(g, rng, spec, 0.12);
      finalize(g);
      return g;
    }
    case MapKind::Hybrid: {
      OccupancyGrid g(w, h, spec.resolution, CellState::Occupied);
      const MazeLayout m = carve_maze(g, rng, spec, 0.1);
      if (m.cols >= 3 && m.rows >= 3) {
        const int ci0 = m.cols / 4;
        const int cj0 = m.rows / 4;
        const int ci1 = std::max(ci0 + 1, m.cols - m.cols / 4);
        const int cj1 = std::max(cj0 + 1, m.rows - m.rows / 4);
        open_room(g, rng, m, ci0, cj0, ci1, cj1, 0.3);
      }
      finalize(g);
      return g;
    }
    case MapKind::Complex: {
      OccupancyGrid g(w, h, spec.resolution, CellState::Occupied);
      const MazeLayout m = carve_maze(g, rng, spec, 0.25);
      if (m.cols >= 5 && m.rows >= 5) {
        // Several smaller open rooms instead of one core.
        const int rw = std::max(2, m.cols / 5);
        const int rh = std::max(2, m.rows / 5);
        const int rooms = 4 + static_cast<int>((m.cols * m.rows) / 400);
        for (int r = 0; r < rooms; ++r) {
          const int i0 = uniform(rng, 0, m.cols - rw);
          const int j0 = uniform(rng, 0, m.rows - rh);
          open_room(g, rng, m, i0, j0, i0 + rw, j0 + rh, 0.3);
        }
      } else if (m.cols >= 3 && m.rows >= 3) {
        open_room(g, rng, m, m.cols / 3, m.rows / 3, m.cols - m.cols / 3,
                  m.rows - m.rows / 3, 0.3);
      }
      finalize(g);
      return g;
    }
  }
  throw ConfigError("generate_map: unhandled map kind");
}

int free_component_count(const OccupancyGrid& grid) {
  std::vector<std::size_t> sizes;
  label_free_components(grid, &sizes);
  return static_cast<int>(sizes.size());
}

}  // namespace mrx
