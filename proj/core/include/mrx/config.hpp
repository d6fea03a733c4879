#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mrx/baselines.hpp"
#include "mrx/env.hpp"

namespace mrx {

struct RunSettings {
  int repetitions = 3;
  std::uint64_t seed = 0;
  /// Record planning time; off keeps outputs byte-reproducible.
  bool timing = false;
  bool write_trajectories = true;
  /// Fixed map across repetitions; otherwise each repetition's seed.
  std::optional<std::uint64_t> map_seed;
};

struct ExperimentConfig {
  EpisodeConfig episode;
  PolicySpec policy;
  RunSettings run;
};

/// Parses the JSON experiment schema (sections world, comms, graph, reward,
/// run). Every key is optional; unknown keys and out-of-range values raise
/// ConfigError. A missing budget defaults by map kind.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Pretty-printed JSON holding every field.
std::string experiment_config_to_json(const ExperimentConfig& config);

}  // namespace mrx
