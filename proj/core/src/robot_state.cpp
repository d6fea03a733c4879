#include "mrx/robot_state.hpp"

namespace mrx {

RobotState::RobotState(int robot_id, int team_size, Vec2 start, const OccupancyGrid& like)
    : id(robot_id),
      position(start),
      belief(like),
      teammates(static_cast<std::size_t>(team_size)),
      trajectory{start},
      self_sensed(like.cell_count(), 0) {}

void RobotState::sense(const CellUpdates& updates, std::int64_t step) {
  belief.integrate(updates, step);
  for (const auto& u : updates) {
    if (u.state != CellState::Free) continue;
    auto& flag = self_sensed[belief.grid().index(u.cell)];
    if (!flag) {
      flag = 1;
      ++self_sensed_free;
    }
  }
}

std::vector<Vec2> RobotState::known_robot_positions() const {
  std::vector<Vec2> out{position};
  for (std::size_t j = 0; j < teammates.size(); ++j) {
    if (static_cast<int>(j) == id || teammates[j].contact_step < 0) continue;
    out.push_back(teammates[j].position);
  }
  return out;
}

}  // namespace mrx
