#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrx/geometry.hpp"

namespace mrx {

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

inline bool is_known(CellState s) { return s != CellState::Unknown; }

/// Raised when two grids that must share geometry do not.
class GeometryMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major 2D lattice of cell states. Cell (x, y) covers the square
/// [x*res, (x+1)*res) x [y*res, (y+1)*res) in world coordinates.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution,
                CellState fill = CellState::Unknown);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  std::size_t cell_count() const { return cells_.size(); }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_of_index(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width_)),
            static_cast<int>(i / static_cast<std::size_t>(width_))};
  }

  CellState at(Cell c) const { return cells_[index(c)]; }
  CellState at_index(std::size_t i) const { return cells_[i]; }
  void set(Cell c, CellState s) { cells_[index(c)] = s; }
  void set_index(std::size_t i, CellState s) { cells_[i] = s; }

  /// Out-of-bounds cells read as Occupied.
  CellState at_or_wall(Cell c) const {
    return in_bounds(c) ? at(c) : CellState::Occupied;
  }

  Cell world_to_cell(Vec2 p) const;
  Vec2 cell_center(Cell c) const;
  /// Center of the cell that contains p.
  Vec2 snap(Vec2 p) const { return cell_center(world_to_cell(p)); }

  std::size_t count(CellState s) const;
  std::size_t known_count() const { return cell_count() - count(CellState::Unknown); }

  bool same_geometry(const OccupancyGrid& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           resolution_ == other.resolution_;
  }
  void require_same_geometry(const OccupancyGrid& other, const char* what) const;

  const std::vector<CellState>& cells() const { return cells_; }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<CellState> cells_;
};

/// A single sensed cell.
struct CellUpdate {
  Cell cell;
  CellState state = CellState::Unknown;

  friend bool operator==(const CellUpdate&, const CellUpdate&) = default;
};

using CellUpdates = std::vector<CellUpdate>;

/// A robot's map belief: an occupancy grid plus, per cell, the step at which
/// the stored state was last observed. Stamps order Free/Occupied conflicts
/// when beliefs are merged.
class BeliefMap {
 public:
  static constexpr std::int64_t kNever = -1;

  BeliefMap() = default;
  BeliefMap(int width, int height, double resolution);
  explicit BeliefMap(const OccupancyGrid& like);

  const OccupancyGrid& grid() const { return grid_; }
  std::int64_t stamp(Cell c) const { return stamps_[grid_.index(c)]; }
  std::int64_t stamp_index(std::size_t i) const { return stamps_[i]; }

  /// Applies sensed updates observed at `step`. Returns the number of cells
  /// that went from Unknown to Known.
  std::size_t integrate(const CellUpdates& updates, std::int64_t step);

  /// Cell-wise union: Known beats Unknown, newer stamp wins on conflicts,
  /// equal stamps resolve to Occupied. Returns cells newly Known here.
  std::size_t merge_from(const BeliefMap& other);

  std::size_t known_count() const { return known_; }
  std::size_t free_count() const { return free_; }

  friend bool operator==(const BeliefMap&, const BeliefMap&) = default;

 private:
  void write(std::size_t i, CellState s, std::int64_t step);

  OccupancyGrid grid_;
  std::vector<std::int64_t> stamps_;
  std::size_t known_ = 0;
  std::size_t free_ = 0;
};

}  // namespace mrx
