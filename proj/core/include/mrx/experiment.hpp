#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mrx/config.hpp"
#include "mrx/metrics.hpp"
#include "mrx/rollout.hpp"

namespace mrx {

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  MetricsReport metrics;
  EpisodeLog log;
};

/// Metrics for one finished episode; plan_ms is NaN unless timed.
MetricsReport metrics_of(const EpisodeLog& log, bool timed);

/// `repetitions` seeded runs; run r uses seed `run.seed + r` for placement
/// and, unless a map seed is fixed, for the map.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, Policy& policy);

/// Columns: run_id,seed,n_robots,map_kind,success,steps,eta_t,eta_d,sigma_pct,plan_ms
void write_metrics_csv(std::ostream& os, const ExperimentConfig& config,
                       const std::vector<RunRecord>& runs);
/// Columns: metric,mean,stdev (population).
void write_summary_csv(std::ostream& os, const std::vector<RunRecord>& runs);
/// metrics.csv, summary.csv and, when enabled, trajectories/run_<id>.csv and
/// comms/run_<id>.jsonl under `dir`.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                              const std::vector<RunRecord>& runs);

struct BenchRow {
  std::string policy;
  bool comms = true;
  int robots = 0;
  MapKind kind = MapKind::Corridor;
  MeanStdev success;
  MeanStdev steps;
  MeanStdev eta_t;
  MeanStdev eta_d;
  MeanStdev sigma;
};

/// Every policy x comms setting x robot count, each over the configured
/// repetitions with identical seeds.
std::vector<BenchRow> run_bench(const ExperimentConfig& base, std::span<const PolicySpec> policies,
                                std::span<const int> robot_counts, bool compare_comms);
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace mrx
