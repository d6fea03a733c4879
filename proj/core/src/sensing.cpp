#include "mrx/sensing.hpp"

#include <cmath>
#include <string>

#include "mrx/raycast.hpp"

namespace mrx {

void SensorSpec::validate() const {
  if (!(range_m > 0.0) || !std::isfinite(range_m)) {
    throw std::invalid_argument("SensorSpec: range must be positive");
  }
  if (ray_count < 4) throw std::invalid_argument("SensorSpec: ray_count must be >= 4");
}

CellUpdates lidar_scan(const OccupancyGrid& truth, Vec2 pose, const SensorSpec& spec) {
  spec.validate();
  const Cell origin = truth.world_to_cell(pose);
  if (!truth.in_bounds(origin) || truth.at(origin) != CellState::Free) {
    throw InvalidPose("lidar_scan: pose is not on a Free cell");
  }
  const double r = spec.range_m / truth.resolution();
  const double r2 = r * r;
  const int reach = static_cast<int>(std::floor(r));
  CellUpdates out;
  const int y0 = std::max(0, origin.y - reach);
  const int y1 = std::min(truth.height() - 1, origin.y + reach);
  const int x0 = std::max(0, origin.x - reach);
  const int x1 = std::min(truth.width() - 1, origin.x + reach);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - origin.x;
      const double dy = y - origin.y;
      if (dx * dx + dy * dy > r2) continue;
      const Cell target{x, y};
      const bool visible = traverse_segment(origin, target, [&](Cell c) {
        return c == target || truth.at_or_wall(c) != CellState::Occupied;
      });
      if (visible) out.push_back({target, truth.at(target)});
    }
  }
  return out;
}

OccupancyGrid integrate_scan(OccupancyGrid belief, const CellUpdates& updates) {
  for (const auto& u : updates) {
    if (!belief.in_bounds(u.cell)) {
      throw GeometryMismatch("integrate_scan: update outside belief grid");
    }
    if (u.state != CellState::Unknown) belief.set(u.cell, u.state);
  }
  return belief;
}

bool is_frontier(const OccupancyGrid& belief, Cell c) {
  if (belief.at(c) != CellState::Free) return false;
  const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
  for (const Cell n : nbrs) {
    if (belief.in_bounds(n) && belief.at(n) == CellState::Unknown) return true;
  }
  return false;
}

std::vector<Cell> extract_frontiers(const OccupancyGrid& belief) {
  std::vector<Cell> out;
  for (int y = 0; y < belief.height(); ++y) {
    for (int x = 0; x < belief.width(); ++x) {
      if (is_frontier(belief, {x, y})) out.push_back({x, y});
    }
  }
  return out;
}

std::size_t covered_free_cells(const OccupancyGrid& belief, const OccupancyGrid& truth) {
  belief.require_same_geometry(truth, "coverage_fraction");
  std::size_t both = 0;
  for (std::size_t i = 0; i < truth.cell_count(); ++i) {
    if (truth.at_index(i) == CellState::Free && belief.at_index(i) == CellState::Free) ++both;
  }
  return both;
}

double coverage_fraction(const OccupancyGrid& belief, const OccupancyGrid& truth) {
  const std::size_t total = truth.count(CellState::Free);
  if (total == 0) throw std::invalid_argument("coverage_fraction: truth has no Free cells");
  return static_cast<double>(covered_free_cells(belief, truth)) / static_cast<double>(total);
}

bool meets_coverage(std::size_t covered, std::size_t total) {
  return total > 0 && covered * 100 >= total * 99;
}

}  // namespace mrx
