#include "mrx/env.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>

#include "mrx/raycast.hpp"

namespace mrx {

void SurplusParams::validate() const {
  if (!(min_delta_cells >= 0.0)) throw ConfigError("surplus: min_delta_cells must be >= 0");
  if (!(s_min > 0.0)) throw ConfigError("surplus: s_min must be > 0");
}

void RewardWeights::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("reward: gamma must lie in (0, 1]");
  for (double a : {alpha_frontiers, alpha_distance, alpha_team, alpha_surplus, completion}) {
    if (!std::isfinite(a)) throw ConfigError("reward: weights must be finite");
  }
}

void EpisodeConfig::validate() const {
  if (robots < 1) throw ConfigError("episode: robot count must be >= 1");
  if (budget <= 0) throw ConfigError("episode: budget must be > 0");
  if (launch_stagger < 0) throw ConfigError("episode: launch stagger must be >= 0");
  if (!(utility_cap > 0.0)) throw ConfigError("episode: utility cap must be > 0");
  sensor.validate();
  comms.validate();
  graph.validate();
  reward.validate();
  surplus.validate();
}

int EpisodeConfig::default_budget(MapKind kind) { return kind == MapKind::Complex ? 384 : 196; }

SurplusField map_surplus_field(const HierGraph& planning, std::size_t self_vertex,
                               std::size_t self_known_cells,
                               std::span<const TeammateTarget> teammates,
                               const SurplusParams& params) {
  SurplusField field;
  field.s.assign(planning.size(), 0.0);
  std::optional<ShortestPaths> sp;
  for (const TeammateTarget& t : teammates) {
    const double delta =
        static_cast<double>(self_known_cells) - static_cast<double>(t.known_cells_at_contact);
    if (delta < params.min_delta_cells) continue;
    if (t.vertex == self_vertex) continue;
    if (!sp) sp = dijkstra(planning, self_vertex);
    if (!sp->reachable(t.vertex)) {
      field.unreachable.push_back(t.id);
      continue;
    }
    SurplusPath path;
    path.teammate = t.id;
    path.delta = delta;
    path.vertices = sp->path_to(t.vertex);
    const double total = sp->dist[t.vertex];
    for (std::size_t v : path.vertices) {
      const double d = sp->dist[v];
      const double s = v == t.vertex ? delta : d * (delta - params.s_min) / total + params.s_min;
      path.along.push_back(d);
      path.values.push_back(s);
      field.s[v] = std::max(field.s[v], s);
    }
    field.max_delta = std::max(field.max_delta, delta);
    field.paths.push_back(std::move(path));
  }
  return field;
}

std::vector<std::size_t> action_candidates(const HierGraph& planning, std::size_t current,
                                           int k) {
  std::vector<Edge> nb = planning.neighbors(current);
  std::sort(nb.begin(), nb.end(), [](const Edge& a, const Edge& b) {
    return a.length != b.length ? a.length < b.length : a.to < b.to;
  });
  std::vector<std::size_t> out;
  for (const Edge& e : nb) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(e.to);
  }
  return out;
}

double total_reward(const RewardBreakdown& r, const RewardWeights& w) {
  return w.alpha_frontiers * r.frontiers + w.alpha_distance * r.distance +
         w.alpha_team * r.team + w.alpha_surplus * r.surplus + r.completion;
}

namespace {

int frontier_count_near(const OccupancyGrid& g, const std::vector<std::size_t>& cells) {
  int n = 0;
  for (std::size_t i : cells) n += is_frontier(g, g.cell_of_index(i)) ? 1 : 0;
  return n;
}

// Cells whose frontier status can change when `updates` are integrated.
std::vector<std::size_t> affected_cells(const OccupancyGrid& g, const CellUpdates& updates) {
  std::vector<std::size_t> out;
  out.reserve(updates.size() * 5);
  static constexpr int kDx[] = {0, 1, -1, 0, 0};
  static constexpr int kDy[] = {0, 0, 0, 1, -1};
  for (const auto& u : updates) {
    for (int k = 0; k < 5; ++k) {
      const Cell c{u.cell.x + kDx[k], u.cell.y + kDy[k]};
      if (g.in_bounds(c)) out.push_back(g.index(c));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Episode::Episode(const EpisodeConfig& config)
    : Episode(config, generate_map(config.map)) {}

Episode::Episode(const EpisodeConfig& config, OccupancyGrid truth)
    : config_(config), truth_(std::move(truth)) {
  config_.validate();
  truth_free_ = truth_.count(CellState::Free);
  if (truth_free_ == 0) throw ConfigError("episode: ground truth has no Free cells");
  privileged_ = BeliefMap(truth_);
  place_robots();

  const std::size_t n = robots_.size();
  local_.resize(n);
  planning_.resize(n);
  centers_.resize(n);
  surplus_.resize(n);
  observations_.resize(n);

  for (int i = 0; i < robot_count(); ++i) sense(i, nullptr);
  StepResult dummy;
  exchange(&dummy);
  for (int i = 0; i < robot_count(); ++i) update_graphs(i);
  for (int i = 0; i < robot_count(); ++i) build_observation(i);
  log_step(std::vector<RewardBreakdown>(n), std::vector<double>(n, 0.0));
  success_ = all_covered();
  done_ = success_;
}

bool Episode::all_covered() const {
  for (const RobotState& r : robots_) {
    if (!meets_coverage(covered_free_cells(r.belief.grid(), truth_), truth_free_)) return false;
  }
  return true;
}

void Episode::place_robots() {
  std::vector<std::size_t> free_cells;
  for (std::size_t i = 0; i < truth_.cell_count(); ++i) {
    if (truth_.at_index(i) == CellState::Free) free_cells.push_back(i);
  }
  std::mt19937_64 rng(config_.seed ^ 0x5bd1e9955bd1e995ULL);
  std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
  const Cell anchor = truth_.cell_of_index(free_cells[pick(rng)]);

  // Breadth-first from the anchor; robots take the first cells that keep a
  // one-cell gap to each other.
  std::vector<Cell> chosen;
  std::vector<bool> seen(truth_.cell_count(), false);
  std::deque<Cell> queue{anchor};
  seen[truth_.index(anchor)] = true;
  while (!queue.empty() && static_cast<int>(chosen.size()) < config_.robots) {
    const Cell c = queue.front();
    queue.pop_front();
    const bool spaced = std::all_of(chosen.begin(), chosen.end(), [&](Cell o) {
      return std::max(std::abs(o.x - c.x), std::abs(o.y - c.y)) >= 2;
    });
    if (spaced) chosen.push_back(c);
    for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
      const Cell nc{c.x + d.x, c.y + d.y};
      if (!truth_.in_bounds(nc) || truth_.at(nc) != CellState::Free) continue;
      if (seen[truth_.index(nc)]) continue;
      seen[truth_.index(nc)] = true;
      queue.push_back(nc);
    }
  }
  if (static_cast<int>(chosen.size()) < config_.robots) {
    throw ConfigError("episode: not enough free space to place " +
                      std::to_string(config_.robots) + " robots");
  }
  for (int i = 0; i < config_.robots; ++i) {
    RobotState r(i, config_.robots, truth_.cell_center(chosen[static_cast<std::size_t>(i)]),
                 truth_);
    r.launch_step = i * config_.launch_stagger;
    // Start poses are common knowledge.
    for (int j = 0; j < config_.robots; ++j) {
      if (j == i) continue;
      r.teammates[static_cast<std::size_t>(j)].position =
          truth_.cell_center(chosen[static_cast<std::size_t>(j)]);
      r.teammates[static_cast<std::size_t>(j)].contact_step = 0;
    }
    robots_.push_back(std::move(r));
  }
}

void Episode::sense(int i, RewardBreakdown* reward) {
  RobotState& r = robots_[static_cast<std::size_t>(i)];
  const CellUpdates scan = lidar_scan(truth_, r.position, config_.sensor);
  r.sense(scan, step_);
  const std::vector<std::size_t> touched = affected_cells(truth_, scan);
  const int before = frontier_count_near(privileged_.grid(), touched);
  privileged_.integrate(scan, step_);
  const int after = frontier_count_near(privileged_.grid(), touched);
  if (reward) reward->team = static_cast<double>(after - before);
}

void Episode::exchange(StepResult* result) {
  std::vector<Vec2> positions;
  for (const auto& r : robots_) positions.push_back(r.position);
  if (config_.comms_enabled) {
    components_ = connectivity_components(positions, truth_, config_.comms);
  } else {
    components_.clear();
    for (int i = 0; i < robot_count(); ++i) components_.push_back({i});
  }
  component_index_.assign(robots_.size(), 0);
  for (std::size_t c = 0; c < components_.size(); ++c) {
    for (int m : components_[c]) component_index_[static_cast<std::size_t>(m)] = static_cast<int>(c);
  }
  for (const auto& comp : components_) {
    if (comp.size() < 2) continue;
    std::vector<RobotState*> members;
    for (int m : comp) members.push_back(&robots_[static_cast<std::size_t>(m)]);
    CommEvent ev = sync_members(members, config_.graph, step_);
    events_.push_back(ev);
    result->events.push_back(std::move(ev));
  }
}

const std::vector<int>& Episode::component_of(int robot) const {
  return components_[static_cast<std::size_t>(component_index_[static_cast<std::size_t>(robot)])];
}

double Episode::coverage(int robot) const {
  return static_cast<double>(
             covered_free_cells(robots_[static_cast<std::size_t>(robot)].belief.grid(), truth_)) /
         static_cast<double>(truth_free_);
}

void Episode::update_graphs(int i) {
  const auto ui = static_cast<std::size_t>(i);
  RobotState& r = robots_[ui];
  const GraphParams& gp = config_.graph;
  const OccupancyGrid& belief = r.belief.grid();
  const FrontierIndex frontiers(belief, gp.sensor_range_m);

  local_[ui] = build_local_graph(belief, r.position, gp, frontiers);
  centers_[ui] = frontier_centers(local_[ui], gp.cluster_radius_m);
  extend_global_graph(r.global, r.position, centers_[ui], belief, gp);
  const std::vector<Vec2> known = r.known_robot_positions();
  sparsify_global_graph(r.global, belief, gp, known);

  if (step_ % gp.prune_period == 0) {
    std::vector<Vec2> present;
    for (const Vec2& p : known) {
      if (r.global.find_at(p)) present.push_back(p);
    }
    std::vector<Vec2> targets;
    for (const auto& c : centers_[ui]) targets.push_back(c.pos);
    for (std::size_t v = 0; v < r.global.size(); ++v) {
      GraphVertex& gv = r.global.vertex(v);
      if (!gv.anchor) continue;
      if (frontiers.visible_count(belief, gv.pos, gp.sensor_range_m) > 0) {
        targets.push_back(gv.pos);
      } else {
        gv.anchor = false;
      }
    }
    r.global = prune_global_graph(r.global, present, targets);
  }
  planning_[ui] = planning_graph(r.global, local_[ui], belief, gp, frontiers);
}

void Episode::build_observation(int i) {
  const auto ui = static_cast<std::size_t>(i);
  const RobotState& r = robots_[ui];
  const HierGraph& g = planning_[ui];
  Observation obs;
  obs.k = config_.graph.k;
  obs.current = 0;  // the local layer puts the robot first
  const std::size_t n = g.size();
  obs.positions = g.positions();
  obs.utility.resize(n);
  obs.neighbors.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    obs.utility[v] = g.vertex(v).utility;
    for (const Edge& e : g.neighbors(v)) obs.neighbors[v].push_back(e.to);
  }
  obs.candidates = action_candidates(g, obs.current, obs.k);

  std::vector<double> indicator(n, 0.0);
  std::vector<TeammateTarget> targets;
  for (std::size_t j = 0; j < r.teammates.size(); ++j) {
    const TeammateInfo& info = r.teammates[j];
    if (static_cast<int>(j) == i || info.contact_step < 0) continue;
    const std::size_t v = *g.nearest(info.position);
    if (v != obs.current) indicator[v] = 1.0;
    if (!info.reached) {
      targets.push_back({static_cast<int>(j), v, info.known_cells});
    }
  }
  indicator[obs.current] = -1.0;

  if (config_.surplus.enabled) {
    surplus_[ui] = map_surplus_field(g, obs.current, r.belief.known_count(), targets,
                                     config_.surplus);
  } else {
    surplus_[ui] = SurplusField{};
    surplus_[ui].s.assign(n, 0.0);
  }
  obs.surplus = surplus_[ui].s;

  const double diag = std::hypot(truth_.width() * truth_.resolution(),
                                 truth_.height() * truth_.resolution());
  const double half2 = 0.25 * config_.graph.lattice_m * config_.graph.lattice_m;
  const double s_norm = surplus_[ui].max_delta > 0.0 ? surplus_[ui].max_delta : 1.0;
  obs.nodes.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    AugmentedNode& node = obs.nodes[v];
    const Vec2 p = obs.positions[v];
    node.x = (p.x - r.position.x) / diag;
    node.y = (p.y - r.position.y) / diag;
    node.utility = std::min<double>(obs.utility[v], config_.utility_cap) / config_.utility_cap;
    node.guidepost = std::any_of(r.trajectory.begin(), r.trajectory.end(), [&](Vec2 t) {
                       return squared_distance(t, p) <= half2;
                     })
                         ? 1.0
                         : 0.0;
    node.indicator = indicator[v];
    node.surplus = obs.surplus[v] / s_norm;
  }
  observations_[ui] = std::move(obs);
}

StepResult Episode::step(std::span<const std::ptrdiff_t> targets) {
  if (done_) throw ContractViolation("step: episode already finished");
  if (targets.size() != robots_.size()) {
    throw ContractViolation("step: expected one target per robot");
  }
  // Validate everything before mutating.
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    const std::ptrdiff_t t = targets[i];
    if (t == kStay) continue;
    const auto& cand = observations_[i].candidates;
    if (t < 0 || std::find(cand.begin(), cand.end(), static_cast<std::size_t>(t)) == cand.end()) {
      throw ContractViolation("step: robot " + std::to_string(i) + " target " +
                              std::to_string(t) + " is not a candidate");
    }
  }

  const std::size_t n = robots_.size();
  ++step_;
  StepResult result;
  result.rewards.resize(n);
  std::vector<double> moved(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    RobotState& r = robots_[i];
    RewardBreakdown& rw = result.rewards[i];
    const std::ptrdiff_t t = step_ - 1 >= r.launch_step ? targets[i] : kStay;
    if (t != kStay) {
      const Observation& obs = observations_[i];
      const auto v = static_cast<std::size_t>(t);
      const Vec2 dest = obs.positions[v];
      const double d = distance(r.position, dest);
      rw.frontiers = obs.utility[v];
      rw.surplus = obs.surplus[v];
      rw.distance = -d;
      moved[i] = d;
      r.position = dest;
      r.distance_travelled += d;
      r.trajectory.push_back(dest);
      for (auto& info : r.teammates) {
        if (info.contact_step >= 0 && squared_distance(info.position, dest) <
                                          0.25 * config_.graph.lattice_m * config_.graph.lattice_m) {
          info.reached = true;
        }
      }
    }
    sense(static_cast<int>(i), &rw);
  }
  exchange(&result);
  for (int i = 0; i < robot_count(); ++i) update_graphs(i);

  success_ = all_covered();
  done_ = success_ || step_ >= config_.budget;
  for (auto& rw : result.rewards) {
    if (success_) rw.completion = config_.reward.completion;
    rw.total = total_reward(rw, config_.reward);
  }
  for (int i = 0; i < robot_count(); ++i) build_observation(i);
  log_step(result.rewards, moved);
  result.done = done_;
  result.success = success_;
  return result;
}

void Episode::log_step(const std::vector<RewardBreakdown>& rewards,
                       const std::vector<double>& moved) {
  const double cell_area = truth_.resolution() * truth_.resolution();
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    TrajectoryRow row;
    row.step = step_;
    row.robot = static_cast<int>(i);
    row.pos = robots_[i].position;
    row.reward = rewards[i];
    row.travelled = moved[i];
    const std::size_t covered = covered_free_cells(robots_[i].belief.grid(), truth_);
    row.coverage = static_cast<double>(covered) / static_cast<double>(truth_free_);
    row.known_m2 = static_cast<double>(covered) * cell_area;
    log_.push_back(row);
  }
}

}  // namespace mrx
