#include "mrx/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mrx {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

}  // namespace

MetricsReport metrics_of(const EpisodeLog& log, bool timed) {
  const double plan_ms = timed && log.decisions > 0
                             ? 1000.0 * log.plan_seconds / static_cast<double>(log.decisions)
                             : std::numeric_limits<double>::quiet_NaN();
  MetricsReport m = compute_metrics(log.rows, log.robots, log.success, plan_ms);
  if (log.truth_free_cells > 0 && !log.self_sensed_free.empty()) {
    std::vector<double> pct;
    for (std::size_t c : log.self_sensed_free) {
      pct.push_back(100.0 * static_cast<double>(c) / static_cast<double>(log.truth_free_cells));
    }
    m.sigma_self_pct = mean_stdev(pct).stdev;
  }
  return m;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  auto policy = make_policy(config.policy);
  return run_experiment(config, *policy);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, Policy& policy) {
  std::vector<RunRecord> runs;
  RolloutOptions opts;
  opts.timing = config.run.timing;
  for (int r = 0; r < config.run.repetitions; ++r) {
    EpisodeConfig ep = config.episode;
    ep.seed = config.run.seed + static_cast<std::uint64_t>(r);
    ep.map.seed = config.run.map_seed.value_or(ep.seed);
    RunRecord rec;
    rec.run_id = r;
    rec.seed = ep.seed;
    rec.log = run_episode(ep, policy, ep.seed, opts);
    rec.metrics = metrics_of(rec.log, opts.timing);
    runs.push_back(std::move(rec));
  }
  return runs;
}

void write_metrics_csv(std::ostream& os, const ExperimentConfig& config,
                       const std::vector<RunRecord>& runs) {
  os << "run_id,seed,n_robots,map_kind,success,steps,eta_t,eta_d,sigma_pct,plan_ms\n";
  for (const RunRecord& r : runs) {
    const MetricsReport& m = r.metrics;
    os << r.run_id << ',' << r.seed << ',' << config.episode.robots << ','
       << to_string(config.episode.map.kind) << ',' << (m.success ? 1 : 0) << ',' << m.steps
       << ',' << fmt(m.eta_t) << ',' << fmt(m.eta_d) << ',' << fmt(m.sigma_pct) << ','
       << fmt(m.plan_ms) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  auto column = [&](auto get) {
    std::vector<double> v;
    for (const RunRecord& r : runs) v.push_back(get(r.metrics));
    return mean_stdev(v);
  };
  os << "metric,mean,stdev\n";
  auto row = [&](const char* name, MeanStdev ms) {
    os << name << ',' << fmt(ms.mean) << ',' << fmt(ms.stdev) << '\n';
  };
  row("success", column([](const MetricsReport& m) { return m.success ? 1.0 : 0.0; }));
  row("steps", column([](const MetricsReport& m) { return static_cast<double>(m.steps); }));
  row("eta_t", column([](const MetricsReport& m) { return m.eta_t; }));
  row("eta_d", column([](const MetricsReport& m) { return m.eta_d; }));
  row("sigma_pct", column([](const MetricsReport& m) { return m.sigma_pct; }));
  row("sigma_self_pct", column([](const MetricsReport& m) { return m.sigma_self_pct; }));
  row("known_area_m2", column([](const MetricsReport& m) { return m.known_area_m2; }));
  row("distance_m", column([](const MetricsReport& m) { return m.distance_m; }));
  row("longest_path_m", column([](const MetricsReport& m) { return m.longest_path_m; }));
  row("plan_ms", column([](const MetricsReport& m) { return m.plan_ms; }));
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                              const std::vector<RunRecord>& runs) {
  std::filesystem::create_directories(dir);
  {
    auto os = open_out(dir / "metrics.csv");
    write_metrics_csv(os, config, runs);
  }
  {
    auto os = open_out(dir / "summary.csv");
    write_summary_csv(os, runs);
  }
  if (!config.run.write_trajectories) return;
  std::filesystem::create_directories(dir / "trajectories");
  std::filesystem::create_directories(dir / "comms");
  for (const RunRecord& r : runs) {
    const std::string stem = "run_" + std::to_string(r.run_id);
    auto ts = open_out(dir / "trajectories" / (stem + ".csv"));
    write_trajectory_csv(ts, r.log.rows);
    auto cs = open_out(dir / "comms" / (stem + ".jsonl"));
    for (const CommEvent& ev : r.log.events) cs << ev.to_json() << '\n';
  }
}

std::vector<BenchRow> run_bench(const ExperimentConfig& base, std::span<const PolicySpec> policies,
                                std::span<const int> robot_counts, bool compare_comms) {
  std::vector<BenchRow> out;
  const std::vector<bool> comms_modes =
      compare_comms ? std::vector<bool>{true, false} : std::vector<bool>{base.episode.comms_enabled};
  for (const PolicySpec& spec : policies) {
    for (bool comms : comms_modes) {
      for (int n : robot_counts) {
        ExperimentConfig cfg = base;
        cfg.policy = spec;
        cfg.episode.robots = n;
        cfg.episode.comms_enabled = comms;
        const auto runs = run_experiment(cfg);
        BenchRow row;
        row.policy = spec.kind;
        row.comms = comms;
        row.robots = n;
        row.kind = cfg.episode.map.kind;
        auto col = [&](auto get) {
          std::vector<double> v;
          for (const RunRecord& r : runs) v.push_back(get(r.metrics));
          return mean_stdev(v);
        };
        row.success = col([](const MetricsReport& m) { return m.success ? 1.0 : 0.0; });
        row.steps = col([](const MetricsReport& m) { return static_cast<double>(m.steps); });
        row.eta_t = col([](const MetricsReport& m) { return m.eta_t; });
        row.eta_d = col([](const MetricsReport& m) { return m.eta_d; });
        row.sigma = col([](const MetricsReport& m) { return m.sigma_pct; });
        out.push_back(row);
      }
    }
  }
  return out;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "policy,comms,n_robots,map_kind,success_mean,steps_mean,steps_std,eta_t_mean,eta_t_std,"
        "eta_d_mean,eta_d_std,sigma_pct_mean,sigma_pct_std\n";
  for (const BenchRow& r : rows) {
    os << r.policy << ',' << (r.comms ? "on" : "off") << ',' << r.robots << ','
       << to_string(r.kind) << ',' << fmt(r.success.mean) << ',' << fmt(r.steps.mean) << ','
       << fmt(r.steps.stdev) << ',' << fmt(r.eta_t.mean) << ',' << fmt(r.eta_t.stdev) << ','
       << fmt(r.eta_d.mean) << ',' << fmt(r.eta_d.stdev) << ',' << fmt(r.sigma.mean) << ','
       << fmt(r.sigma.stdev) << '\n';
  }
}

}  // namespace mrx
