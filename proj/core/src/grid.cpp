#include "mrx/grid.hpp"

#include <algorithm>
#include <cmath>

namespace mrx {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             CellState fill)
    : width_(width), height_(height), resolution_(resolution) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("OccupancyGrid: dimensions must be positive");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("OccupancyGrid: resolution must be positive");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                fill);
}

Cell OccupancyGrid::world_to_cell(Vec2 p) const {
  return {static_cast<int>(std::floor(p.x / resolution_)),
          static_cast<int>(std::floor(p.y / resolution_))};
}

Vec2 OccupancyGrid::cell_center(Cell c) const {
  return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

void OccupancyGrid::require_same_geometry(const OccupancyGrid& other,
                                          const char* what) const {
  if (!same_geometry(other)) {
    throw GeometryMismatch(std::string(what) + ": grid geometry mismatch (" +
                           std::to_string(width_) + "x" + std::to_string(height_) +
                           " vs " + std::to_string(other.width_) + "x" +
                           std::to_string(other.height_) + ")");
  }
}

BeliefMap::BeliefMap(int width, int height, double resolution)
    : grid_(width, height, resolution, CellState::Unknown),
      stamps_(grid_.cell_count(), kNever) {}

BeliefMap::BeliefMap(const OccupancyGrid& like)
    : BeliefMap(like.width(), like.height(), like.resolution()) {}

void BeliefMap::write(std::size_t i, CellState s, std::int64_t step) {
  const CellState old = grid_.at_index(i);
  if (old == CellState::Unknown) ++known_;
  if (old == CellState::Free) --free_;
  if (s == CellState::Free) ++free_;
  grid_.set_index(i, s);
  stamps_[i] = step;
}

std::size_t BeliefMap::integrate(const CellUpdates& updates, std::int64_t step) {
  std::size_t gained = 0;
  for (const auto& u : updates) {
    if (!grid_.in_bounds(u.cell)) {
      throw GeometryMismatch("BeliefMap::integrate: update outside grid");
    }
    if (u.state == CellState::Unknown) continue;
    const std::size_t i = grid_.index(u.cell);
    if (grid_.at_index(i) == CellState::Unknown) ++gained;
    write(i, u.state, std::max(step, stamps_[i]));
  }
  return gained;
}

std::size_t BeliefMap::merge_from(const BeliefMap& other) {
  grid_.require_same_geometry(other.grid_, "BeliefMap::merge_from");
  std::size_t gained = 0;
  const std::size_t n = grid_.cell_count();
  for (std::size_t i = 0; i < n; ++i) {
    const CellState theirs = other.grid_.at_index(i);
    if (theirs == CellState::Unknown) continue;
    const CellState mine = grid_.at_index(i);
    if (mine == CellState::Unknown) {
      ++gained;
      write(i, theirs, other.stamps_[i]);
      continue;
    }
    if (mine == theirs) {
      stamps_[i] = std::max(stamps_[i], other.stamps_[i]);
      continue;
    }
    const std::int64_t ts = other.stamps_[i];
    if (ts > stamps_[i] || (ts == stamps_[i] && theirs == CellState::Occupied)) {
      write(i, theirs, ts);
    }
  }
  return gained;
}

}  // namespace mrx
