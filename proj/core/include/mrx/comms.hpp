#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrx/geometry.hpp"
#include "mrx/grid.hpp"
#include "mrx/roadmap.hpp"
#include "mrx/robot_state.hpp"

namespace mrx {

enum class CommsMode { Proximity, SignalStrength };

/// Link model. Signal mode uses a log-distance path loss with a fixed
/// attenuation per Occupied cell crossed:
///   PL = PL0 + 10 n log10(max(d, d0) / d0) + wall_db * walls
/// and connects when P_T - PL >= P_thresh.
struct CommsParams {
  CommsMode mode = CommsMode::Proximity;
  double d_comm = 30.0;
  double p_t_dbm = 20.0;
  double p_thresh_dbm = -80.0;
  double pl0_db = 40.0;
  double d0_m = 1.0;
  double exponent = 3.0;
  double wall_db = 8.0;

  void validate() const;
  /// Distance at which a wall-free link reaches exactly P_thresh.
  double free_space_radius() const;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

double path_loss(Vec2 a, Vec2 b, const OccupancyGrid& truth, const CommsParams& params);

/// Closed thresholds in both modes.
bool is_connected(Vec2 a, Vec2 b, const OccupancyGrid& truth, const CommsParams& params);

/// Partition of robot indices under the transitive closure of is_connected.
/// Members ascend within a component; components ordered by first member.
std::vector<std::vector<int>> connectivity_components(std::span<const Vec2> positions,
                                                      const OccupancyGrid& truth,
                                                      const CommsParams& params);

struct CommEvent {
  std::int64_t step = 0;
  std::vector<int> component;
  /// Per member, cells that became Known through the exchange.
  std::vector<std::size_t> cells_merged;
  /// Per member, incoming graph vertices added before sparsification.
  std::vector<std::size_t> graph_nodes;

  std::string to_json() const;
};

/// Information exchange inside one connected component: beliefs become
/// their cell-wise union, last-known teammate records refresh, and every
/// member ingests the others' global graphs. Throws ContractViolation when
/// the robots are not one component.
CommEvent sync_component(std::span<RobotState* const> members, const OccupancyGrid& truth,
                         const CommsParams& comms, const GraphParams& graph,
                         std::int64_t step);

/// Same without the connectivity precondition check (the caller already
/// computed the component).
CommEvent sync_members(std::span<RobotState* const> members, const GraphParams& graph,
                       std::int64_t step);

}  // namespace mrx
