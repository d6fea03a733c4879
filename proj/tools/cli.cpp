#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrx/config.hpp"
#include "mrx/experiment.hpp"
#include "mrx/map_io.hpp"
#include "mrx/mapgen.hpp"
#include "mrx/policy_model.hpp"
#include "mrx/trainer.hpp"

namespace mrx::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

ExperimentConfig load_or_default(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? parse_experiment_config("{}")
                                          : load_experiment_config(c.config);
  if (c.seed_given) cfg.run.seed = c.seed;
  return cfg;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_genmaps(const Common& c, const std::string& kind_name, int count, int width, int height,
                std::ostream& out) {
  const MapKind kind = parse_map_kind(kind_name);
  const fs::path dir = c.out.empty() ? fs::path("maps") : fs::path(c.out);
  fs::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
    MapSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    if (width > 0) spec.width_m = width * spec.resolution;
    if (height > 0) spec.height_m = height * spec.resolution;
    const OccupancyGrid grid = generate_map(spec);
    const fs::path file = dir / (std::string(to_string(kind)) + "_" + std::to_string(seed) + ".map");
    save_map(file.string(), grid);
    out << file.string() << " " << grid.width() << "x" << grid.height() << "\n";
  }
  return 0;
}

int cmd_run(const Common& c, bool timing, std::ostream& out) {
  ExperimentConfig cfg = load_or_default(c);
  if (timing) cfg.run.timing = true;
  const auto runs = run_experiment(cfg);
  const fs::path dir = c.out.empty() ? fs::path("run_out") : fs::path(c.out);
  write_experiment_outputs(dir, cfg, runs);
  write_summary_csv(out, runs);
  return 0;
}

int cmd_train(const Common& c, int episodes, int d, int layers, bool ablation, bool curriculum,
              int eval_episodes, std::ostream& out) {
  const ExperimentConfig cfg = load_or_default(c);
  TrainConfig tc;
  tc.base = cfg.episode;
  tc.episodes = episodes;
  tc.seed = cfg.run.seed;
  if (curriculum) tc.stages = {easy_stage(), difficult_stage()};
  PolicyShape shape;
  shape.d = d;
  shape.layers = layers;
  shape.k = cfg.episode.graph.k;
  const PolicyNet init = PolicyNet::initialize(shape, cfg.run.seed);
  const fs::path dir = c.out.empty() ? fs::path("train_out") : fs::path(c.out);
  fs::create_directories(dir);
  if (ablation) {
    const AblationResult r = run_ablation(tc, init, eval_episodes, cfg.run.seed + 100000);
    save_weights(r.with_surplus.net, dir / "weights_with_surplus.mrxw");
    save_weights(r.without_surplus.net, dir / "weights_without_surplus.mrxw");
    std::ofstream cw(dir / "curve_with_surplus.csv");
    write_curve_csv(cw, r.with_surplus.curve);
    std::ofstream co(dir / "curve_without_surplus.csv");
    write_curve_csv(co, r.without_surplus.curve);
    std::ofstream ab(dir / "ablation.csv");
    write_ablation_csv(ab, r);
    write_ablation_csv(out, r);
    return 0;
  }
  const TrainResult r = train(tc, init);
  save_weights(r.net, dir / "weights.mrxw");
  std::ofstream cs(dir / "curve.csv");
  write_curve_csv(cs, r.curve);
  write_curve_csv(out, r.curve);
  return 0;
}

int cmd_bench(const Common& c, const std::string& policies, const std::string& robots,
              bool compare_comms, std::ostream& out) {
  const ExperimentConfig cfg = load_or_default(c);
  std::vector<PolicySpec> specs;
  for (const std::string& k : split(policies)) {
    PolicySpec s = cfg.policy;
    s.kind = k;
    specs.push_back(s);
  }
  std::vector<int> counts;
  for (const std::string& r : split(robots)) counts.push_back(std::stoi(r));
  if (specs.empty() || counts.empty()) throw ConfigError("bench: need policies and robot counts");
  const auto rows = run_bench(cfg, specs, counts, compare_comms);
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    std::ofstream os(fs::path(c.out) / "bench.csv");
    write_bench_csv(os, rows);
  }
  write_bench_csv(out, rows);
  return 0;
}

int cmd_gradcheck(const Common& c, int graphs, int d, int layers, std::ostream& out) {
  PolicyShape shape;
  shape.d = d;
  shape.layers = layers;
  const GradCheckReport rep = gradient_check(shape, c.seed, graphs);
  out << "graphs " << rep.graphs << " parameters_checked " << rep.checked
      << " max_relative_error " << rep.max_rel_error << "\n";
  return rep.max_rel_error < 1e-4 ? 0 : 1;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-robot exploration simulator and trainer"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", common.config, "Experiment JSON config");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    else opt->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Output directory");
    sub->add_option("--seed", common.seed, "Base seed");
  };

  auto* genmaps = app.add_subcommand("genmaps", "Write procedurally generated maps");
  add_common(genmaps, false);
  std::string kind = "corridor";
  int count = 1;
  int width = 0;
  int height = 0;
  genmaps->add_option("--kind", kind, "empty|simple|corridor|hybrid|complex");
  genmaps->add_option("--count", count, "Number of maps (seeds seed..seed+count-1)")->check(CLI::PositiveNumber);
  genmaps->add_option("--width-cells", width, "Override width in cells");
  genmaps->add_option("--height-cells", height, "Override height in cells");

  auto* runc = app.add_subcommand("run", "Run an experiment from a config");
  add_common(runc, true);
  bool timing = false;
  runc->add_flag("--timing", timing, "Record planning time (output no longer reproducible)");

  auto* trainc = app.add_subcommand("train", "Curriculum policy training");
  add_common(trainc, false);
  int episodes = 200;
  int d = 32;
  int layers = 2;
  bool ablation = false;
  bool curriculum = false;
  int eval_episodes = 20;
  trainc->add_option("--episodes", episodes, "Training episodes")->check(CLI::NonNegativeNumber);
  trainc->add_option("--d", d, "Embedding width")->check(CLI::Range(8, 1024));
  trainc->add_option("--layers", layers, "Encoder layers")->check(CLI::Range(1, 16));
  trainc->add_flag("--ablation", ablation, "Paired run with and without the map-surplus term");
  trainc->add_flag("--curriculum", curriculum, "Easy then Difficult stage mix");
  trainc->add_option("--eval-episodes", eval_episodes, "Greedy evaluation episodes for --ablation");

  auto* bench = app.add_subcommand("bench", "Baseline comparison grid");
  add_common(bench, false);
  std::string policies = "greedy,nearest,pursuit,preplanned";
  std::string robots = "2,4";
  bool compare_comms = false;
  bench->add_option("--policies", policies, "Comma-separated policy kinds");
  bench->add_option("--robots", robots, "Comma-separated robot counts");
  bench->add_flag("--compare-comms", compare_comms, "Also run every cell with comms disabled");

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of policy gradients");
  add_common(grad, false);
  int graphs = 20;
  int gd = 16;
  int gl = 2;
  grad->add_option("--graphs", graphs, "Random graphs")->check(CLI::PositiveNumber);
  grad->add_option("--d", gd, "Embedding width")->check(CLI::Range(8, 256));
  grad->add_option("--layers", gl, "Encoder layers")->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  for (CLI::App* sub : {genmaps, runc, trainc, bench, grad}) {
    if (sub->parsed()) {
      if (sub->count("--seed")) common.seed_given = true;
    }
  }

  try {
    if (genmaps->parsed()) return cmd_genmaps(common, kind, count, width, height, out);
    if (runc->parsed()) return cmd_run(common, timing, out);
    if (trainc->parsed()) {
      return cmd_train(common, episodes, d, layers, ablation, curriculum, eval_episodes, out);
    }
    if (bench->parsed()) return cmd_bench(common, policies, robots, compare_comms, out);
    if (grad->parsed()) return cmd_gradcheck(common, graphs, gd, gl, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mrx::cli
