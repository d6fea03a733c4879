#include "mrx/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "mrx/sensing.hpp"

namespace mrx {

namespace {

bool visited(const Observation& obs, std::size_t v) { return obs.nodes[v].guidepost > 0.0; }

// Nearest vertex (graph distance) with nonzero utility, unvisited ones
// first. Falls back to the vertex closest to any frontier cell.
std::optional<std::size_t> exploration_target(const DecisionContext& ctx) {
  const Observation& obs = ctx.obs;
  const ShortestPaths sp = dijkstra(ctx.planning, obs.current);
  for (bool need_unvisited : {true, false}) {
    std::optional<std::size_t> best;
    for (std::size_t v = 0; v < obs.size(); ++v) {
      if (v == obs.current || obs.utility[v] <= 0 || !sp.reachable(v)) continue;
      if (need_unvisited && visited(obs, v)) continue;
      if (!best || sp.dist[v] < sp.dist[*best]) best = v;
    }
    if (best) return best;
  }
  const std::vector<Cell> frontiers = extract_frontiers(ctx.robot.belief.grid());
  if (frontiers.empty()) return std::nullopt;
  std::optional<std::size_t> best;
  double best_d2 = 0.0;
  for (std::size_t v = 0; v < obs.size(); ++v) {
    if (v == obs.current || !sp.reachable(v)) continue;
    double d2 = std::numeric_limits<double>::infinity();
    for (const Cell& c : frontiers) {
      d2 = std::min(d2, squared_distance(obs.positions[v], ctx.robot.belief.grid().cell_center(c)));
    }
    if (!best || d2 < best_d2) {
      best = v;
      best_d2 = d2;
    }
  }
  return best;
}

int navigate(const DecisionContext& ctx, std::optional<std::size_t> target) {
  if (!target) return -1;
  return step_towards(ctx, *target).value_or(-1);
}

}  // namespace

std::optional<int> step_towards(const DecisionContext& ctx, std::size_t target) {
  const Observation& obs = ctx.obs;
  if (obs.candidates.empty()) return std::nullopt;
  const ShortestPaths sp = dijkstra(ctx.planning, target);
  std::optional<int> best;
  double best_cost = 0.0;
  for (std::size_t s = 0; s < obs.candidates.size(); ++s) {
    const std::size_t c = obs.candidates[s];
    if (!sp.reachable(c)) continue;
    const double cost = distance(obs.positions[obs.current], obs.positions[c]) + sp.dist[c];
    if (!best || cost < best_cost) {
      best = static_cast<int>(s);
      best_cost = cost;
    }
  }
  return best;
}

void GreedyUtilityPolicy::reset(int team_size, std::uint64_t) {
  claims_.assign(static_cast<std::size_t>(std::max(team_size, 0)), std::nullopt);
}

int GreedyUtilityPolicy::act(const DecisionContext& ctx) {
  const Observation& obs = ctx.obs;
  const RobotState& me = ctx.robot;
  if (claims_.size() != me.teammates.size()) reset(static_cast<int>(me.teammates.size()), 0);
  const auto self = static_cast<std::size_t>(me.id);

  std::vector<Vec2> others;
  for (int m : ctx.component) {
    if (m != me.id && claims_[static_cast<std::size_t>(m)]) others.push_back(*claims_[static_cast<std::size_t>(m)]);
  }
  const double r2 = ctx.sensor_range_m * ctx.sensor_range_m;
  auto contested = [&](Vec2 p) {
    return std::any_of(others.begin(), others.end(),
                       [&](Vec2 o) { return squared_distance(o, p) < r2; });
  };
  const double bearing = 2.0 * 3.14159265358979323846 * me.id / std::max(1, ctx.team_size);
  auto heading = [&](Vec2 p) {
    const Vec2 d = p - me.position;
    if (d.x == 0.0 && d.y == 0.0) return 1.0;
    return 1.0 + 0.5 * std::cos(std::atan2(d.y, d.x) - bearing);
  };

  std::optional<int> best;
  double best_score = 0.0;
  for (std::size_t s = 0; s < obs.candidates.size(); ++s) {
    const std::size_t v = obs.candidates[s];
    if (obs.utility[v] <= 0 || visited(obs, v)) continue;
    const Vec2 p = obs.positions[v];
    const double score = obs.utility[v] * heading(p) * (contested(p) ? 0.25 : 1.0);
    if (!best || score > best_score) {
      best = static_cast<int>(s);
      best_score = score;
    }
  }
  if (best) {
    claims_[self] = obs.positions[obs.candidates[static_cast<std::size_t>(*best)]];
    return *best;
  }

  const ShortestPaths sp = dijkstra(ctx.planning, obs.current);
  std::optional<std::size_t> target;
  double target_cost = 0.0;
  for (bool need_unvisited : {true, false}) {
    for (std::size_t v = 0; v < obs.size(); ++v) {
      if (v == obs.current || obs.utility[v] <= 0 || !sp.reachable(v)) continue;
      if (need_unvisited && visited(obs, v)) continue;
      const double cost = sp.dist[v] + (contested(obs.positions[v]) ? 2.0 * ctx.sensor_range_m : 0.0);
      if (!target || cost < target_cost) {
        target = v;
        target_cost = cost;
      }
    }
    if (target) break;
  }
  if (!target) target = exploration_target(ctx);
  claims_[self] = target ? std::optional<Vec2>(obs.positions[*target]) : std::nullopt;
  return navigate(ctx, target);
}

int NearestFrontierPolicy::act(const DecisionContext& ctx) {
  return navigate(ctx, exploration_target(ctx));
}

int PursuitPolicy::act(const DecisionContext& ctx) {
  const Observation& obs = ctx.obs;
  const RobotState& me = ctx.robot;
  if (std::isfinite(threshold_) && !obs.candidates.empty()) {
    const ShortestPaths sp = dijkstra(ctx.planning, obs.current);
    std::optional<std::size_t> target;
    double best_ratio = threshold_;
    for (std::size_t j = 0; j < me.teammates.size(); ++j) {
      const TeammateInfo& info = me.teammates[j];
      if (static_cast<int>(j) == me.id || info.contact_step < 0 || info.reached) continue;
      const std::size_t v = *ctx.planning.nearest(info.position);
      if (v == obs.current || !sp.reachable(v)) continue;
      const double gain = static_cast<double>(me.belief.known_count()) -
                          static_cast<double>(info.known_cells);
      const double ratio = gain / sp.dist[v];
      if (ratio > best_ratio) {
        best_ratio = ratio;
        target = v;
      }
    }
    if (target) {
      if (auto s = step_towards(ctx, *target)) return *s;
    }
  }
  return greedy_.act(ctx);
}

std::optional<std::size_t> minimax_vertex(const HierGraph& graph,
                                          std::span<const std::size_t> sources) {
  std::vector<double> worst(graph.size(), 0.0);
  for (std::size_t s : sources) {
    const ShortestPaths sp = dijkstra(graph, s);
    for (std::size_t v = 0; v < graph.size(); ++v) worst[v] = std::max(worst[v], sp.dist[v]);
  }
  std::optional<std::size_t> best;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (std::isinf(worst[v])) continue;
    if (!best || worst[v] < worst[*best]) best = v;
  }
  return best;
}

void PreplannedPolicy::reset(int team_size, std::uint64_t) {
  plans_.assign(static_cast<std::size_t>(team_size), std::nullopt);
}

std::optional<Vec2> PreplannedPolicy::rendezvous(int robot) const {
  const auto& p = plans_.at(static_cast<std::size_t>(robot));
  if (!p) return std::nullopt;
  return p->pos;
}

int PreplannedPolicy::act(const DecisionContext& ctx) {
  const RobotState& me = ctx.robot;
  if (plans_.size() != me.teammates.size()) reset(static_cast<int>(me.teammates.size()), 0);
  const auto self = static_cast<std::size_t>(me.id);
  const int t = ctx.step;
  const bool leader = !ctx.component.empty() &&
                      *std::min_element(ctx.component.begin(), ctx.component.end()) == me.id;

  if (period_ > 0 && t > 0 && t % period_ == 0 && leader) {
    std::vector<std::size_t> sources{ctx.obs.current};
    for (std::size_t j = 0; j < me.teammates.size(); ++j) {
      if (j == self || me.teammates[j].contact_step < 0) continue;
      sources.push_back(*ctx.planning.nearest(me.teammates[j].position));
    }
    if (auto r = minimax_vertex(ctx.planning, sources)) {
      for (int m : ctx.component) {
        plans_[static_cast<std::size_t>(m)] = Plan{ctx.obs.positions[*r], t};
      }
    }
  }

  std::optional<Plan>& plan = plans_[self];
  if (plan) {
    const bool team_together = static_cast<int>(ctx.component.size()) == ctx.team_size;
    if ((team_together && t > plan->issued) || t - plan->issued >= std::max(1, period_ / 2)) {
      plan.reset();
    }
  }
  if (!plan) return greedy_.act(ctx);

  const std::size_t target = *ctx.planning.nearest(plan->pos);
  if (target == ctx.obs.current) return -1;
  if (auto s = step_towards(ctx, target)) return *s;
  return greedy_.act(ctx);
}

int NeuralPolicy::act(const DecisionContext& ctx) {
  if (ctx.obs.candidates.empty()) return -1;
  const PolicyOutput out = evaluate(net_, make_input(ctx.obs));
  return select_action(out, mode_, rng_);
}

int RandomPolicy::act(const DecisionContext& ctx) {
  if (ctx.obs.candidates.empty()) return -1;
  return std::uniform_int_distribution<int>(0, static_cast<int>(ctx.obs.candidates.size()) - 1)(rng_);
}

std::unique_ptr<Policy> baseline_policy(BaselineKind kind, const PolicySpec& spec) {
  switch (kind) {
    case BaselineKind::GreedyUtility: return std::make_unique<GreedyUtilityPolicy>();
    case BaselineKind::NearestFrontier: return std::make_unique<NearestFrontierPolicy>();
    case BaselineKind::Pursuit: return std::make_unique<PursuitPolicy>(spec.pursuit_threshold);
    case BaselineKind::Preplanned: return std::make_unique<PreplannedPolicy>(spec.rendezvous_period);
  }
  throw ConfigError("unknown baseline kind");
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec) {
  if (spec.kind == "greedy") return baseline_policy(BaselineKind::GreedyUtility, spec);
  if (spec.kind == "nearest") return baseline_policy(BaselineKind::NearestFrontier, spec);
  if (spec.kind == "pursuit") return baseline_policy(BaselineKind::Pursuit, spec);
  if (spec.kind == "preplanned") {
    if (spec.rendezvous_period < 1) throw ConfigError("policy: rendezvous period must be >= 1");
    return baseline_policy(BaselineKind::Preplanned, spec);
  }
  if (spec.kind == "random") return std::make_unique<RandomPolicy>();
  if (spec.kind == "learned") {
    if (spec.weights.empty()) throw ConfigError("policy: learned policy needs a weights file");
    try {
      return std::make_unique<NeuralPolicy>(load_weights(spec.weights),
                                            spec.sample ? SelectMode::Sample : SelectMode::Greedy);
    } catch (const WeightsFormatError& e) {
      throw ConfigError(std::string("policy: ") + e.what());
    }
  }
  throw ConfigError("policy: unknown kind '" + spec.kind + "'");
}

}  // namespace mrx
