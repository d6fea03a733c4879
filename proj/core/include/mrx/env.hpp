#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mrx/comms.hpp"
#include "mrx/graph.hpp"
#include "mrx/grid.hpp"
#include "mrx/mapgen.hpp"
#include "mrx/roadmap.hpp"
#include "mrx/robot_state.hpp"
#include "mrx/sensing.hpp"

namespace mrx {

struct SurplusParams {
  /// Minimum map-area advantage (Known cells) before a teammate attracts.
  double min_delta_cells = 100.0;
  /// Value at the observing robot's own vertex.
  double s_min = 1.0;
  /// Ablation switch: when false the field is zero and r_s vanishes.
  bool enabled = true;

  void validate() const;
};

struct RewardWeights {
  double alpha_frontiers = 1.0;   // r_o
  double alpha_distance = 0.1;    // r_d
  double alpha_team = 1.0;        // r_f
  double alpha_surplus = 0.5;     // r_s
  double completion = 20.0;       // r_c
  double gamma = 0.99;

  void validate() const;
};

struct EpisodeConfig {
  int robots = 3;
  int budget = 196;
  MapSpec map;
  SensorSpec sensor;
  CommsParams comms;
  bool comms_enabled = true;
  GraphParams graph;
  RewardWeights reward;
  SurplusParams surplus;
  std::uint64_t seed = 0;
  /// Robot i starts moving at decision step i * launch_stagger.
  int launch_stagger = 0;
  /// Utility normalisation cap (frontier cells).
  double utility_cap = 50.0;

  void validate() const;
  /// Decision-step budget matching the map kind (384 for Complex, else 196).
  static int default_budget(MapKind kind);
};

/// One teammate's contribution to the surplus field: the shortest planning
/// graph path from the observing robot to the teammate's last-known vertex
/// with the linear profile s = d (dM - s_min) / D + s_min laid along it.
struct SurplusPath {
  int teammate = -1;
  double delta = 0.0;
  std::vector<std::size_t> vertices;
  std::vector<double> along;
  std::vector<double> values;
};

struct SurplusField {
  std::vector<double> s;
  std::vector<SurplusPath> paths;
  /// Teammates above threshold whose vertex could not be reached.
  std::vector<int> unreachable;
  /// Largest contributing dM, 0 when nothing contributes.
  double max_delta = 0.0;
};

struct TeammateTarget {
  int id = -1;
  std::size_t vertex = 0;
  std::size_t known_cells_at_contact = 0;
};

/// Per-vertex map-surplus values. Teammates with dM = self_known - their
/// known cells at contact below `min_delta_cells` contribute nothing, as do
/// teammates whose vertex is the observing robot's own vertex. Overlapping
/// paths take the elementwise maximum.
SurplusField map_surplus_field(const HierGraph& planning, std::size_t self_vertex,
                               std::size_t self_known_cells,
                               std::span<const TeammateTarget> teammates,
                               const SurplusParams& params);

/// Normalised per-vertex features handed to a policy.
struct AugmentedNode {
  double x = 0.0;  // robot-centric, divided by the map diagonal
  double y = 0.0;
  double utility = 0.0;   // min(u, cap) / cap
  double guidepost = 0.0; // 1 when visited by this robot
  double indicator = 0.0; // -1 self, +1 last-known teammate, 0 otherwise
  double surplus = 0.0;   // s / max contributing dM

  static constexpr int kFeatureCount = 6;
};

struct Observation {
  std::vector<AugmentedNode> nodes;
  std::vector<Vec2> positions;
  std::vector<int> utility;
  std::vector<double> surplus;
  std::vector<std::vector<std::size_t>> neighbors;
  std::size_t current = 0;
  /// Up to `k` real candidates, nearest first; remaining slots are masked.
  std::vector<std::size_t> candidates;
  int k = 0;

  std::size_t size() const { return nodes.size(); }
};

/// Up to k graph neighbours of `current`, ascending (length, index).
std::vector<std::size_t> action_candidates(const HierGraph& planning, std::size_t current,
                                           int k);

struct RewardBreakdown {
  double frontiers = 0.0;  // r_o
  double distance = 0.0;   // r_d
  double team = 0.0;       // r_f
  double surplus = 0.0;    // r_s
  double completion = 0.0; // r_c
  double total = 0.0;
};

double total_reward(const RewardBreakdown& r, const RewardWeights& w);

/// One row of the trajectory log.
struct TrajectoryRow {
  int step = 0;
  int robot = 0;
  Vec2 pos;
  RewardBreakdown reward;
  double travelled = 0.0;
  double coverage = 0.0;
  double known_m2 = 0.0;
};

struct StepResult {
  std::vector<RewardBreakdown> rewards;
  std::vector<CommEvent> events;
  bool done = false;
  bool success = false;
};

/// Sentinel action: hold position.
inline constexpr std::ptrdiff_t kStay = -1;

/// The decentralised exploration episode loop.
class Episode {
 public:
  explicit Episode(const EpisodeConfig& config);
  Episode(const EpisodeConfig& config, OccupancyGrid truth);

  /// An episode whose start scans already cover the map starts done.
  /// Advances all robots one decision step. `targets[i]` is a vertex index
  /// of robot i's current observation that must be one of its candidates,
  /// or kStay. Throws ContractViolation on invalid targets or when done.
  StepResult step(std::span<const std::ptrdiff_t> targets);

  int robot_count() const { return static_cast<int>(robots_.size()); }
  int step_index() const { return step_; }
  bool done() const { return done_; }
  bool success() const { return success_; }
  bool launched(int robot) const { return step_ >= robots_[robot].launch_step; }

  const EpisodeConfig& config() const { return config_; }
  const OccupancyGrid& truth() const { return truth_; }
  std::size_t truth_free_cells() const { return truth_free_; }
  const BeliefMap& privileged() const { return privileged_; }
  const RobotState& robot(int i) const { return robots_[i]; }
  const Observation& observation(int i) const { return observations_[i]; }
  const HierGraph& planning(int i) const { return planning_[i]; }
  const HierGraph& local_graph(int i) const { return local_[i]; }
  const SurplusField& surplus(int i) const { return surplus_[i]; }
  const std::vector<std::vector<int>>& components() const { return components_; }
  const std::vector<int>& component_of(int robot) const;
  double coverage(int robot) const;
  const std::vector<TrajectoryRow>& log() const { return log_; }
  const std::vector<CommEvent>& events() const { return events_; }

 private:
  void place_robots();
  bool all_covered() const;
  void sense(int robot, RewardBreakdown* reward);
  void exchange(StepResult* result);
  void update_graphs(int robot);
  void build_observation(int robot);
  void log_step(const std::vector<RewardBreakdown>& rewards, const std::vector<double>& moved);

  EpisodeConfig config_;
  OccupancyGrid truth_;
  std::size_t truth_free_ = 0;
  BeliefMap privileged_;
  std::vector<RobotState> robots_;
  std::vector<HierGraph> local_;
  std::vector<HierGraph> planning_;
  std::vector<std::vector<FrontierCenter>> centers_;
  std::vector<SurplusField> surplus_;
  std::vector<Observation> observations_;
  std::vector<std::vector<int>> components_;
  std::vector<int> component_index_;
  std::vector<TrajectoryRow> log_;
  std::vector<CommEvent> events_;
  int step_ = 0;
  bool done_ = false;
  bool success_ = false;
};

}  // namespace mrx
