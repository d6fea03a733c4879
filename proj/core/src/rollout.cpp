#include "mrx/rollout.hpp"

#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mrx {

EpisodeLog run_episode(const EpisodeConfig& config, Policy& policy, std::uint64_t policy_seed,
                       const RolloutOptions& options) {
  EpisodeLog log;
  log.seed = config.seed;
  log.robots = config.robots;
  log.kind = config.map.kind;
  try {
    using Clock = std::chrono::steady_clock;
    auto t0 = Clock::now();
    Episode ep(config);
    const int n = ep.robot_count();
    policy.reset(n, policy_seed);
    std::vector<std::ptrdiff_t> targets(static_cast<std::size_t>(n));
    while (!ep.done()) {
      std::vector<int> slots(static_cast<std::size_t>(n), -1);
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        targets[ui] = kStay;
        if (!ep.launched(i)) continue;
        const Observation& obs = ep.observation(i);
        ++log.decisions;
        if (obs.candidates.empty()) {
          ++log.stay_fallbacks;
          continue;
        }
        const DecisionContext ctx{obs, ep.planning(i), ep.robot(i), ep.component_of(i),
                                  ep.step_index(), n, config.sensor.range_m};
        const int slot = policy.act(ctx);
        if (slot >= static_cast<int>(obs.candidates.size())) {
          throw ContractViolation("policy returned slot " + std::to_string(slot) + " of " +
                                  std::to_string(obs.candidates.size()));
        }
        slots[ui] = slot;
        if (slot >= 0) targets[ui] = static_cast<std::ptrdiff_t>(obs.candidates[static_cast<std::size_t>(slot)]);
      }
      ep.step(targets);
      log.actions.push_back(std::move(slots));
    }
    if (options.timing) {
      log.plan_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    log.steps = ep.step_index();
    log.success = ep.success();
    log.rows = ep.log();
    log.events = ep.events();
    log.truth_free_cells = ep.truth_free_cells();
    for (int i = 0; i < n; ++i) log.self_sensed_free.push_back(ep.robot(i).self_sensed_free);
  } catch (const std::exception& e) {
    throw std::runtime_error("episode seed " + std::to_string(config.seed) + ": " + e.what());
  }
  return log;
}

std::vector<EpisodeLog> collect_rollouts(const EpisodeConfig& config, Policy& policy, int count,
                                         std::uint64_t seed, const RolloutOptions& options) {
  std::vector<EpisodeLog> out;
  for (int e = 0; e < count; ++e) {
    EpisodeConfig c = config;
    c.seed = seed + static_cast<std::uint64_t>(e);
    c.map.seed = c.seed;
    out.push_back(run_episode(c, policy, c.seed, options));
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
  os << "step,robot,x,y,r_o,r_d,r_f,r_s,r_c,reward,travelled,coverage,known_m2\n";
  char buf[512];
  for (const TrajectoryRow& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.step, r.robot, r.pos.x, r.pos.y, r.reward.frontiers, r.reward.distance,
                  r.reward.team, r.reward.surplus, r.reward.completion, r.reward.total,
                  r.travelled, r.coverage, r.known_m2);
    os << buf;
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("trajectory csv: empty");
  std::vector<TrajectoryRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f;
    std::vector<std::string> fields;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() != 13) throw std::runtime_error("trajectory csv: bad row '" + line + "'");
    TrajectoryRow r;
    r.step = std::stoi(fields[0]);
    r.robot = std::stoi(fields[1]);
    r.pos = {std::stod(fields[2]), std::stod(fields[3])};
    r.reward.frontiers = std::stod(fields[4]);
    r.reward.distance = std::stod(fields[5]);
    r.reward.team = std::stod(fields[6]);
    r.reward.surplus = std::stod(fields[7]);
    r.reward.completion = std::stod(fields[8]);
    r.reward.total = std::stod(fields[9]);
    r.travelled = std::stod(fields[10]);
    r.coverage = std::stod(fields[11]);
    r.known_m2 = std::stod(fields[12]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace mrx
