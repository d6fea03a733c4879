#include "mrx/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mrx/rollout.hpp"

namespace mrx {

Adam::Adam(std::size_t size, OptimizerParams params)
    : params_(params), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(PolicyNet& net, std::span<const double> grad) {
  if (grad.size() != net.params.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("adam: size mismatch");
  }
  ++t_;
  const double b1 = params_.beta1;
  const double b2 = params_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < grad.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double mh = m_[i] / c1;
    const double vh = v_[i] / c2;
    net.params[i] -= params_.learning_rate * mh / (std::sqrt(vh) + params_.epsilon);
  }
  net.quantize();
}

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma) {
  std::vector<double> out(rewards.size(), 0.0);
  double g = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    g = rewards[i] + gamma * g;
    out[i] = g;
  }
  return out;
}

UpdateStats policy_gradient_update(std::span<const RobotTrajectory> batch, PolicyNet& net,
                                   Adam& adam, const TrainerParams& params) {
  struct Sample {
    const Decision* d;
    double ret;
    double adv;
  };
  std::vector<Sample> samples;
  for (const RobotTrajectory& traj : batch) {
    std::vector<double> r;
    for (const Decision& d : traj) r.push_back(d.reward * params.reward_scale);
    const std::vector<double> g = discounted_returns(r, params.gamma);
    for (std::size_t t = 0; t < traj.size(); ++t) samples.push_back({&traj[t], g[t], 0.0});
  }
  if (samples.empty()) throw std::invalid_argument("policy_gradient_update: empty batch");

  for (Sample& s : samples) s.adv = s.ret - evaluate(net, s.d->input).value;
  if (params.normalize_advantages) {
    double mean = 0.0;
    for (const Sample& s : samples) mean += s.adv;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (const Sample& s : samples) var += (s.adv - mean) * (s.adv - mean);
    const double sd = std::sqrt(var / static_cast<double>(samples.size()));
    for (Sample& s : samples) s.adv = sd > 1e-8 ? (s.adv - mean) / sd : s.adv - mean;
  }

  UpdateStats st;
  st.samples = samples.size();
  std::vector<double> grad(net.params.size(), 0.0);
  std::vector<double> pgrad(params.track_policy_gradient ? net.params.size() : 0, 0.0);
  for (const Sample& s : samples) {
    LossSpec spec;
    spec.action = s.d->action;
    spec.advantage = s.adv;
    spec.target_return = s.ret;
    spec.value_coef = params.value_coef;
    spec.entropy_coef = params.entropy_coef;
    const LossValue lv = policy_loss(net.shape, net.params, s.d->input, spec, grad);
    st.loss += lv.total;
    st.policy_loss += lv.policy;
    st.value_loss += lv.value;
    st.entropy += lv.entropy;
    if (params.track_policy_gradient) {
      spec.value_coef = 0.0;
      spec.entropy_coef = 0.0;
      policy_loss(net.shape, net.params, s.d->input, spec, pgrad);
    }
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  st.loss *= inv;
  st.policy_loss *= inv;
  st.value_loss *= inv;
  st.entropy *= inv;
  if (!std::isfinite(st.loss)) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "policy_gradient_update: non-finite loss (policy %g, value %g, entropy %g, "
                  "%zu samples)",
                  st.policy_loss, st.value_loss, st.entropy, st.samples);
    throw std::runtime_error(buf);
  }
  double norm2 = 0.0;
  for (double& g : grad) {
    g *= inv;
    norm2 += g * g;
  }
  st.grad_norm = std::sqrt(norm2);
  double pn2 = 0.0;
  for (double g : pgrad) pn2 += (g * inv) * (g * inv);
  st.policy_grad_norm = std::sqrt(pn2);
  const double clip = adam.params().grad_clip;
  if (clip > 0.0 && st.grad_norm > clip) {
    const double k = clip / st.grad_norm;
    for (double& g : grad) g *= k;
  }
  adam.step(net, grad);
  return st;
}

GraphInput bandit_input() {
  GraphInput in;
  in.features = Eigen::MatrixXd::Zero(3, AugmentedNode::kFeatureCount);
  in.features(0, 4) = -1.0;
  in.features(1, 0) = 0.05;
  in.features(1, 2) = 0.5;
  in.features(2, 0) = -0.05;
  in.features(2, 2) = 0.5;
  in.neighbors = {{1, 2}, {0}, {0}};
  in.current = 0;
  in.candidates = {1, 2};
  return in;
}

BanditResult train_bandit(const PolicyShape& shape, std::uint64_t seed, int updates, int batch,
                          const TrainerParams& params) {
  PolicyNet net = PolicyNet::initialize(shape, seed);
  Adam adam(net.params.size(), params.optimizer);
  std::mt19937_64 rng(seed + 1);
  const GraphInput in = bandit_input();
  BanditResult res;
  for (int u = 0; u < updates; ++u) {
    std::vector<RobotTrajectory> trajs;
    const PolicyOutput out = evaluate(net, in);
    for (int b = 0; b < batch; ++b) {
      const int a = select_action(out, SelectMode::Sample, rng);
      const double reward = a == kBanditRewardedSlot ? 1.0 / params.reward_scale : 0.0;
      trajs.push_back({Decision{in, a, reward}});
    }
    policy_gradient_update(trajs, net, adam, params);
    const double p = evaluate(net, in).probs[kBanditRewardedSlot];
    res.rewarded_probability.push_back(p);
    if (res.updates_to_090 < 0 && p >= 0.9) res.updates_to_090 = u + 1;
  }
  return res;
}

CurriculumStage easy_stage() {
  return {StageKind::Easy, {MapKind::Simple, MapKind::Corridor}, 3, 5, 0.5};
}

CurriculumStage difficult_stage() {
  return {StageKind::Difficult, {MapKind::Corridor, MapKind::Hybrid, MapKind::Complex}, 4, 6, 0.5};
}

TrainingEpisode run_training_episode(const EpisodeConfig& config, const PolicyNet& net,
                                     std::mt19937_64& rng) {
  Episode ep(config);
  const int n = ep.robot_count();
  TrainingEpisode out;
  out.robots.resize(static_cast<std::size_t>(n));
  std::vector<std::ptrdiff_t> targets(static_cast<std::size_t>(n));
  while (!ep.done()) {
    std::vector<bool> decided(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      targets[ui] = kStay;
      const Observation& obs = ep.observation(i);
      if (!ep.launched(i) || obs.candidates.empty()) continue;
      GraphInput in = make_input(obs);
      const int a = select_action(evaluate(net, in), SelectMode::Sample, rng);
      targets[ui] = static_cast<std::ptrdiff_t>(obs.candidates[static_cast<std::size_t>(a)]);
      out.robots[ui].push_back({std::move(in), a, 0.0});
      decided[ui] = true;
    }
    const StepResult res = ep.step(targets);
    for (std::size_t i = 0; i < decided.size(); ++i) {
      if (decided[i]) out.robots[i].back().reward = res.rewards[i].total;
    }
  }
  out.success = ep.success();
  out.steps = ep.step_index();
  double dist = 0.0;
  for (int i = 0; i < n; ++i) dist += ep.robot(i).distance_travelled;
  out.mean_distance = dist / n;
  return out;
}

EpisodeConfig curriculum_episode(const TrainConfig& config, int e) {
  EpisodeConfig ep = config.base;
  ep.seed = config.seed * 1000003ULL + static_cast<std::uint64_t>(e);
  ep.map.seed = ep.seed;
  if (config.stages.empty()) return ep;
  double total = 0.0;
  for (const auto& s : config.stages) total += s.share;
  const CurriculumStage* stage = &config.stages.back();
  double acc = 0.0;
  int stage_start = 0;
  for (const auto& s : config.stages) {
    const double end = (acc + s.share / total) * config.episodes;
    if (static_cast<double>(e) < end) {
      stage = &s;
      break;
    }
    acc += s.share / total;
    stage_start = static_cast<int>(std::ceil(end));
  }
  // Map kinds rotate so the mix within a stage is exactly even.
  const auto rank = static_cast<std::size_t>(std::max(0, e - stage_start));
  ep.map.kind = stage->maps[rank % stage->maps.size()];
  std::mt19937_64 rng(ep.seed ^ 0x9e3779b97f4a7c15ULL);
  ep.robots = std::uniform_int_distribution<int>(stage->min_robots, stage->max_robots)(rng);
  return ep;
}

TrainResult train(const TrainConfig& config, PolicyNet net) {
  TrainResult res;
  if (config.episodes <= 0) {
    res.net = std::move(net);
    return res;
  }
  if (config.episodes_per_update < 1 || config.window < 1) {
    throw std::invalid_argument("train: episodes_per_update and window must be >= 1");
  }
  Adam adam(net.params.size(), config.trainer.optimizer);
  std::mt19937_64 rng(config.seed);
  std::vector<RobotTrajectory> batch;
  CurveRow window;
  int in_window = 0;
  auto flush = [&]() {
    if (in_window == 0) return;
    window.window = static_cast<int>(res.curve.size());
    window.success_rate /= in_window;
    window.mean_steps /= in_window;
    window.mean_distance /= in_window;
    res.curve.push_back(window);
    window = CurveRow{};
    in_window = 0;
  };
  for (int e = 0; e < config.episodes; ++e) {
    TrainingEpisode te = run_training_episode(curriculum_episode(config, e), net, rng);
    window.success_rate += te.success ? 1.0 : 0.0;
    window.mean_steps += te.steps;
    window.mean_distance += te.mean_distance;
    ++in_window;
    for (auto& t : te.robots) {
      if (!t.empty()) batch.push_back(std::move(t));
    }
    const bool last = e + 1 == config.episodes;
    if (((e + 1) % config.episodes_per_update == 0 || last) && !batch.empty()) {
      res.updates.push_back(policy_gradient_update(batch, net, adam, config.trainer));
      batch.clear();
    }
    if ((e + 1) % config.window == 0 || last) flush();
  }
  res.net = std::move(net);
  return res;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& curve) {
  os << "window,success_rate,mean_steps,mean_distance\n";
  char buf[160];
  for (const CurveRow& r : curve) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g\n", r.window, r.success_rate,
                  r.mean_steps, r.mean_distance);
    os << buf;
  }
}

EvalSummary evaluate_policy(const EpisodeConfig& config, Policy& policy, int episodes,
                            std::uint64_t seed) {
  EvalSummary s;
  s.episodes = episodes;
  if (episodes <= 0) return s;
  for (const EpisodeLog& log : collect_rollouts(config, policy, episodes, seed)) {
    s.success_rate += log.success ? 1.0 : 0.0;
    s.mean_steps += log.steps;
    std::vector<double> d(static_cast<std::size_t>(log.robots), 0.0);
    for (const TrajectoryRow& r : log.rows) d[static_cast<std::size_t>(r.robot)] += r.travelled;
    double sum = 0.0;
    for (double x : d) sum += x;
    s.mean_distance += sum / log.robots;
  }
  s.success_rate /= episodes;
  s.mean_steps /= episodes;
  s.mean_distance /= episodes;
  return s;
}

AblationResult run_ablation(const TrainConfig& config, const PolicyNet& initial,
                            int eval_episodes, std::uint64_t eval_seed) {
  AblationResult out;
  TrainConfig with = config;
  with.base.surplus.enabled = true;
  TrainConfig without = config;
  without.base.surplus.enabled = false;
  out.with_surplus = train(with, initial);
  out.without_surplus = train(without, initial);
  NeuralPolicy pw(out.with_surplus.net, SelectMode::Greedy);
  NeuralPolicy po(out.without_surplus.net, SelectMode::Greedy);
  out.eval_with = evaluate_policy(with.base, pw, eval_episodes, eval_seed);
  out.eval_without = evaluate_policy(without.base, po, eval_episodes, eval_seed);
  return out;
}

void write_ablation_csv(std::ostream& os, const AblationResult& r) {
  os << "variant,success_pct,steps,distance_m\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "with_surplus,%.4g,%.6g,%.6g\n", 100.0 * r.eval_with.success_rate,
                r.eval_with.mean_steps, r.eval_with.mean_distance);
  os << buf;
  std::snprintf(buf, sizeof buf, "without_surplus,%.4g,%.6g,%.6g\n",
                100.0 * r.eval_without.success_rate, r.eval_without.mean_steps,
                r.eval_without.mean_distance);
  os << buf;
}

}  // namespace mrx
