#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mrx/baselines.hpp"
#include "mrx/env.hpp"

namespace mrx {

struct RolloutOptions {
  /// Measure wall time of policy and graph updates per decision.
  bool timing = false;
};

struct EpisodeLog {
  std::uint64_t seed = 0;
  int robots = 0;
  MapKind kind = MapKind::Simple;
  int steps = 0;
  bool success = false;
  std::vector<TrajectoryRow> rows;
  std::vector<CommEvent> events;
  /// actions[t][i]: candidate slot chosen by robot i at decision t, -1 = stay.
  std::vector<std::vector<int>> actions;
  /// Decisions taken with no candidate available.
  std::size_t stay_fallbacks = 0;
  std::size_t decisions = 0;
  double plan_seconds = 0.0;
  std::size_t truth_free_cells = 0;
  /// Per robot, Free cells it sensed itself by the end.
  std::vector<std::size_t> self_sensed_free;
};

/// One episode of `policy` under `config` (seed, map seed included).
/// Errors are rethrown as std::runtime_error carrying the episode seed.
EpisodeLog run_episode(const EpisodeConfig& config, Policy& policy, std::uint64_t policy_seed,
                       const RolloutOptions& options = {});

/// `count` independent episodes; episode e uses seed `seed + e` for both the
/// map and the start placement.
std::vector<EpisodeLog> collect_rollouts(const EpisodeConfig& config, Policy& policy, int count,
                                         std::uint64_t seed, const RolloutOptions& options = {});

/// Columns: step,robot,x,y,r_o,r_d,r_f,r_s,r_c,reward,travelled,coverage,known_m2
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& is);

}  // namespace mrx
