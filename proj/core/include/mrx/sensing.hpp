#pragma once

#include <stdexcept>
#include <vector>

#include "mrx/geometry.hpp"
#include "mrx/grid.hpp"

namespace mrx {

/// 360 degree range sensor.
struct SensorSpec {
  double range_m = 8.0;
  int ray_count = 360;

  void validate() const;
};

class InvalidPose : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cells visible from `pose` on the ground truth. The sensor origin is the
/// center of the cell containing `pose`. A cell is reported when its center
/// lies within range and the segment from the origin to that center touches
/// no Occupied cell other than the target itself; the first Occupied cell a
/// ray enters is therefore reported and everything behind it is not. Every
/// in-range cell gets its own ray, so the result does not depend on
/// `ray_count`. Output is sorted by cell index.
CellUpdates lidar_scan(const OccupancyGrid& truth, Vec2 pose, const SensorSpec& spec);

/// Unknown cells take the sensed state, Known cells never revert to Unknown,
/// sensed states overwrite older Free/Occupied values.
OccupancyGrid integrate_scan(OccupancyGrid belief, const CellUpdates& updates);

/// Free cells 4-adjacent to at least one Unknown cell, in index order.
std::vector<Cell> extract_frontiers(const OccupancyGrid& belief);

bool is_frontier(const OccupancyGrid& belief, Cell c);

/// |Free(belief) and Free(truth)| / |Free(truth)|.
double coverage_fraction(const OccupancyGrid& belief, const OccupancyGrid& truth);

/// Completion threshold test done in integer arithmetic:
/// covered * 100 >= 99 * total.
bool meets_coverage(std::size_t covered, std::size_t total);
inline constexpr double kCompletionCoverage = 0.99;

/// Numerator of coverage_fraction.
std::size_t covered_free_cells(const OccupancyGrid& belief, const OccupancyGrid& truth);

}  // namespace mrx
