#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mrx/geometry.hpp"
#include "mrx/graph.hpp"
#include "mrx/grid.hpp"

namespace mrx {

/// What a robot remembers about a teammate from their last contact.
struct TeammateInfo {
  Vec2 position;
  /// Teammate's Known-cell count at last contact.
  std::size_t known_cells = 0;
  std::int64_t contact_step = -1;
  /// Set once this robot has stood on `position` since that contact.
  bool reached = false;
};

struct RobotState {
  int id = 0;
  Vec2 position;
  BeliefMap belief;
  /// Sparse Global layer owned by this robot.
  HierGraph global;
  /// Indexed by robot id; the robot's own slot is unused.
  std::vector<TeammateInfo> teammates;
  /// Visited viewpoints in order, starting with the launch position.
  std::vector<Vec2> trajectory;
  double distance_travelled = 0.0;
  /// Cells this robot has sensed itself (1 = sensed Free).
  std::vector<std::uint8_t> self_sensed;
  std::size_t self_sensed_free = 0;
  int launch_step = 0;

  RobotState() = default;
  RobotState(int robot_id, int team_size, Vec2 start, const OccupancyGrid& like);

  /// Records the robot's own scan in both its belief and its self-sensed mask.
  void sense(const CellUpdates& updates, std::int64_t step);

  /// Positions of every robot this robot knows about, itself first.
  std::vector<Vec2> known_robot_positions() const;
};

}  // namespace mrx
