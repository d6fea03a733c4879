#include "mrx/comms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "mrx/raycast.hpp"

namespace mrx {

void CommsParams::validate() const {
  if (!(d_comm > 0.0)) throw std::invalid_argument("CommsParams: d_comm must be positive");
  if (!(exponent > 0.0)) throw std::invalid_argument("CommsParams: exponent must be positive");
  if (!(wall_db >= 0.0)) throw std::invalid_argument("CommsParams: wall_db must be >= 0");
  if (!(d0_m > 0.0)) throw std::invalid_argument("CommsParams: d0 must be positive");
}

double CommsParams::free_space_radius() const {
  return d0_m * std::pow(10.0, (p_t_dbm - p_thresh_dbm - pl0_db) / (10.0 * exponent));
}

double path_loss(Vec2 a, Vec2 b, const OccupancyGrid& truth, const CommsParams& params) {
  const double d = std::max(distance(a, b), params.d0_m);
  double pl = params.pl0_db + 10.0 * params.exponent * std::log10(d / params.d0_m);
  if (params.wall_db > 0.0) pl += params.wall_db * occupied_cells_on_segment(truth, a, b);
  return pl;
}

bool is_connected(Vec2 a, Vec2 b, const OccupancyGrid& truth, const CommsParams& params) {
  if (params.mode == CommsMode::Proximity) return distance(a, b) <= params.d_comm;
  return params.p_t_dbm - path_loss(a, b, truth, params) >= params.p_thresh_dbm;
}

std::vector<std::vector<int>> connectivity_components(std::span<const Vec2> positions,
                                                      const OccupancyGrid& truth,
                                                      const CommsParams& params) {
  const int n = static_cast<int>(positions.size());
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> frontier{s};
    label[s] = id;
    while (!frontier.empty()) {
      const int v = frontier.back();
      frontier.pop_back();
      out.back().push_back(v);
      for (int u = 0; u < n; ++u) {
        if (label[u] < 0 && is_connected(positions[v], positions[u], truth, params)) {
          label[u] = id;
          frontier.push_back(u);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

std::string CommEvent::to_json() const {
  nlohmann::json j = {{"step", step},
                      {"component", component},
                      {"cells_merged", cells_merged},
                      {"graph_nodes", graph_nodes}};
  return j.dump();
}

CommEvent sync_members(std::span<RobotState* const> members, const GraphParams& graph,
                       std::int64_t step) {
  CommEvent ev;
  ev.step = step;
  std::vector<RobotState*> order(members.begin(), members.end());
  std::sort(order.begin(), order.end(),
            [](const RobotState* a, const RobotState* b) { return a->id < b->id; });
  for (const RobotState* r : order) ev.component.push_back(r->id);
  ev.cells_merged.assign(order.size(), 0);
  ev.graph_nodes.assign(order.size(), 0);
  if (order.size() < 2) return ev;

  BeliefMap merged = order.front()->belief;
  for (std::size_t i = 1; i < order.size(); ++i) merged.merge_from(order[i]->belief);

  std::vector<HierGraph> snapshots;
  snapshots.reserve(order.size());
  for (const RobotState* r : order) snapshots.push_back(r->global);

  for (std::size_t i = 0; i < order.size(); ++i) {
    RobotState& me = *order[i];
    ev.cells_merged[i] = merged.known_count() - me.belief.known_count();
    me.belief = merged;
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (i == j) continue;
      TeammateInfo& info = me.teammates.at(static_cast<std::size_t>(order[j]->id));
      info.position = order[j]->position;
      info.known_cells = merged.known_count();
      info.contact_step = step;
      info.reached = false;
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    RobotState& me = *order[i];
    const std::vector<Vec2> exempt = me.known_robot_positions();
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (i == j) continue;
      const MergeReport rep =
          merge_global_graphs(me.global, snapshots[j], merged.grid(), graph, exempt);
      ev.graph_nodes[i] += rep.incoming_added;
    }
  }
  return ev;
}

CommEvent sync_component(std::span<RobotState* const> members, const OccupancyGrid& truth,
                         const CommsParams& comms, const GraphParams& graph,
                         std::int64_t step) {
  std::vector<Vec2> positions;
  for (const RobotState* r : members) positions.push_back(r->position);
  if (connectivity_components(positions, truth, comms).size() > 1) {
    throw ContractViolation("sync_component: robots are not one connected component");
  }
  return sync_members(members, graph, step);
}

}  // namespace mrx
