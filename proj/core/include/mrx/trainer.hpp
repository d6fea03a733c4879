#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "mrx/baselines.hpp"
#include "mrx/env.hpp"
#include "mrx/policy_model.hpp"
#include "mrx/policy_net.hpp"

namespace mrx {

struct OptimizerParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Global gradient-norm clip; <= 0 disables.
  double grad_clip = 1.0;
};

class Adam {
 public:
  Adam(std::size_t size, OptimizerParams params);
  /// One update; parameters are re-quantised to float precision.
  void step(PolicyNet& net, std::span<const double> grad);
  const OptimizerParams& params() const { return params_; }
  std::int64_t steps() const { return t_; }

 private:
  OptimizerParams params_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

/// One recorded decision of one robot.
struct Decision {
  GraphInput input;
  int action = 0;
  double reward = 0.0;
};
using RobotTrajectory = std::vector<Decision>;

struct TrainerParams {
  OptimizerParams optimizer;
  double gamma = 0.95;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  /// Rewards are multiplied by this before computing returns.
  double reward_scale = 0.02;
  bool normalize_advantages = true;
  /// Also compute the gradient norm of the policy term alone.
  bool track_policy_gradient = false;
};

struct UpdateStats {
  double loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double grad_norm = 0.0;
  double policy_grad_norm = 0.0;
  std::size_t samples = 0;
};

/// Discounted returns G_t = r_t + gamma G_{t+1}, zero after the last step.
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma);

/// A synchronous advantage actor-critic step over every decision in `batch`
/// (mean loss). Advantages are G - V with the current value head. Throws
/// std::invalid_argument on an empty batch and std::runtime_error on a
/// non-finite loss.
UpdateStats policy_gradient_update(std::span<const RobotTrajectory> batch, PolicyNet& net,
                                   Adam& adam, const TrainerParams& params);

/// Two-armed bandit: a three-vertex graph whose current vertex has two
/// candidates; only slot `kBanditRewardedSlot` pays 1.
inline constexpr int kBanditRewardedSlot = 1;
GraphInput bandit_input();

struct BanditResult {
  /// Probability of the rewarded slot after each update.
  std::vector<double> rewarded_probability;
  /// First update (1-based) at which the probability reached 0.9, or -1.
  int updates_to_090 = -1;
};

BanditResult train_bandit(const PolicyShape& shape, std::uint64_t seed, int updates, int batch,
                          const TrainerParams& params);

enum class StageKind { Easy, Difficult };

struct CurriculumStage {
  StageKind kind = StageKind::Easy;
  std::vector<MapKind> maps;
  int min_robots = 3;
  int max_robots = 5;
  /// Fraction of the training episodes spent in this stage.
  double share = 0.5;
};

/// Simple and Corridor evenly, 3-5 robots.
CurriculumStage easy_stage();
/// Corridor, Hybrid and Complex evenly, 4-6 robots.
CurriculumStage difficult_stage();

struct TrainConfig {
  /// Template episode; stages override the map kind and robot count.
  EpisodeConfig base;
  /// Empty: every episode uses the template as is.
  std::vector<CurriculumStage> stages;
  int episodes = 0;
  int episodes_per_update = 4;
  /// Training episodes per curve row.
  int window = 20;
  std::uint64_t seed = 0;
  TrainerParams trainer;
};

struct CurveRow {
  int window = 0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  double mean_distance = 0.0;
};

struct TrainResult {
  PolicyNet net;
  std::vector<CurveRow> curve;
  std::vector<UpdateStats> updates;
};

struct TrainingEpisode {
  std::vector<RobotTrajectory> robots;
  bool success = false;
  int steps = 0;
  double mean_distance = 0.0;
};

/// One episode with sampled actions, recording every decision.
TrainingEpisode run_training_episode(const EpisodeConfig& config, const PolicyNet& net,
                                     std::mt19937_64& rng);

/// Episode e's configuration under the curriculum.
EpisodeConfig curriculum_episode(const TrainConfig& config, int e);

TrainResult train(const TrainConfig& config, PolicyNet net);

/// Columns: window,success_rate,mean_steps,mean_distance
void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& curve);

struct EvalSummary {
  int episodes = 0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  double mean_distance = 0.0;
};

/// `episodes` runs with seeds `seed + e` (map and placement).
EvalSummary evaluate_policy(const EpisodeConfig& config, Policy& policy, int episodes,
                            std::uint64_t seed);

struct AblationResult {
  TrainResult with_surplus;
  TrainResult without_surplus;
  EvalSummary eval_with;
  EvalSummary eval_without;
};

/// Trains twice from the same initial weights and seeds, with and without
/// the map-surplus field and reward, and evaluates both greedily.
AblationResult run_ablation(const TrainConfig& config, const PolicyNet& initial,
                            int eval_episodes, std::uint64_t eval_seed);

/// Columns: variant,success_pct,steps,distance_m
void write_ablation_csv(std::ostream& os, const AblationResult& result);

}  // namespace mrx
