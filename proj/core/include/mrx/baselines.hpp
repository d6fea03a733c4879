#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrx/env.hpp"
#include "mrx/policy_model.hpp"

namespace mrx {

/// What a robot can see when it decides: its own observation, planning
/// graph and state, plus the members of its current radio component.
struct DecisionContext {
  const Observation& obs;
  const HierGraph& planning;
  const RobotState& robot;
  std::span<const int> component;
  int step = 0;
  int team_size = 1;
  double sensor_range_m = 8.0;
};

/// Common interface of learned and scripted planners. `act` returns a
/// candidate slot of `ctx.obs`, or -1 to hold position.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void reset(int team_size, std::uint64_t seed) = 0;
  virtual int act(const DecisionContext& ctx) = 0;
  virtual std::string name() const = 0;
};

/// Slot of the candidate that minimises edge length plus remaining graph
/// distance to `target`; ties to the lower slot. nullopt if none reaches it.
std::optional<int> step_towards(const DecisionContext& ctx, std::size_t target);

/// Highest-utility unvisited candidate; with none it heads for the nearest
/// nonzero-utility vertex by graph distance. Two tie-breakers spread a team:
/// robots in one radio component share their current targets and discount
/// vertices within sensor range of a teammate's target, and robot i weighs
/// utilities by 1 + 0.5 cos(heading - 2 pi i / n), a fixed per-robot
/// direction preference that also separates robots that cannot talk.
class GreedyUtilityPolicy : public Policy {
 public:
  void reset(int team_size, std::uint64_t seed) override;
  int act(const DecisionContext& ctx) override;
  std::string name() const override { return "greedy"; }

 private:
  std::vector<std::optional<Vec2>> claims_;
};

/// Always heads for the nearest nonzero-utility vertex by graph distance.
class NearestFrontierPolicy : public Policy {
 public:
  void reset(int, std::uint64_t) override {}
  int act(const DecisionContext& ctx) override;
  std::string name() const override { return "nearest"; }
};

/// Greedy exploration that detours to a teammate's last-known vertex when
/// the believed map gain per metre of detour, dM / d, exceeds `threshold`.
/// An infinite threshold never detours.
class PursuitPolicy : public Policy {
 public:
  explicit PursuitPolicy(double threshold) : threshold_(threshold) {}
  void reset(int, std::uint64_t) override {}
  int act(const DecisionContext& ctx) override;
  std::string name() const override { return "pursuit"; }
  double threshold() const { return threshold_; }

 private:
  double threshold_;
  GreedyUtilityPolicy greedy_;
};

/// Periodic rendezvous. Every `period` steps the lowest-id robot of each
/// radio component picks the vertex of its planning graph minimising the
/// largest shortest-path distance from the team's last-known positions and
/// shares it with its component. Robots then travel there and wait until
/// the whole team is connected or `period / 2` steps have passed, and
/// explore greedily otherwise.
class PreplannedPolicy : public Policy {
 public:
  explicit PreplannedPolicy(int period) : period_(period) {}
  void reset(int team_size, std::uint64_t seed) override;
  int act(const DecisionContext& ctx) override;
  std::string name() const override { return "preplanned"; }
  int period() const { return period_; }
  /// Rendezvous position robot `robot` is heading for, if any.
  std::optional<Vec2> rendezvous(int robot) const;

 private:
  struct Plan {
    Vec2 pos;
    int issued = 0;
  };
  int period_;
  std::vector<std::optional<Plan>> plans_;
  GreedyUtilityPolicy greedy_;
};

/// Vertex minimising the maximum shortest-path distance from `sources`
/// (ties to the lower index). nullopt when no vertex reaches all sources.
std::optional<std::size_t> minimax_vertex(const HierGraph& graph,
                                          std::span<const std::size_t> sources);

/// Learned attention policy.
class NeuralPolicy : public Policy {
 public:
  NeuralPolicy(PolicyNet net, SelectMode mode) : net_(std::move(net)), mode_(mode) {}
  void reset(int, std::uint64_t seed) override { rng_.seed(seed); }
  int act(const DecisionContext& ctx) override;
  std::string name() const override { return "learned"; }
  const PolicyNet& net() const { return net_; }

 private:
  PolicyNet net_;
  SelectMode mode_;
  std::mt19937_64 rng_;
};

/// Uniform choice among the real candidates.
class RandomPolicy : public Policy {
 public:
  void reset(int, std::uint64_t seed) override { rng_.seed(seed); }
  int act(const DecisionContext& ctx) override;
  std::string name() const override { return "random"; }

 private:
  std::mt19937_64 rng_;
};

enum class BaselineKind { GreedyUtility, NearestFrontier, Pursuit, Preplanned };

struct PolicySpec {
  /// greedy | nearest | pursuit | preplanned | random | learned
  std::string kind = "greedy";
  double pursuit_threshold = 2.0;
  int rendezvous_period = 40;
  std::string weights;
  bool sample = false;
};

std::unique_ptr<Policy> baseline_policy(BaselineKind kind, const PolicySpec& spec = {});
/// Builds any policy from its spec; throws ConfigError for unknown kinds or
/// unreadable weights.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec);

}  // namespace mrx
