#include "mrx/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mrx {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string("config: '") + section + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) {
      throw ConfigError(std::string("config: unknown key '") + key + "' in '" + section + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

CommsMode parse_mode(const std::string& s) {
  if (s == "proximity") return CommsMode::Proximity;
  if (s == "signal") return CommsMode::SignalStrength;
  throw ConfigError("config: comms mode must be 'proximity' or 'signal'");
}

}  // namespace

namespace {

ExperimentConfig parse_impl(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(root, "root", {"world", "comms", "graph", "reward", "run"});
  ExperimentConfig cfg;
  EpisodeConfig& ep = cfg.episode;
  bool budget_given = false;

  if (root.contains("world")) {
    const json& w = root["world"];
    check_keys(w, "world",
               {"kind", "width_m", "height_m", "width_cells", "height_cells", "resolution",
                "hall_m", "wall_m", "robots", "budget", "sensor_range_m", "ray_count",
                "launch_stagger", "map_seed"});
    if (w.contains("kind")) {
      try {
        ep.map.kind = parse_map_kind(w["kind"].get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config: world.kind: ") + e.what());
      }
    }
    read(w, "resolution", ep.map.resolution);
    if (!(ep.map.resolution > 0.0)) throw ConfigError("config: world.resolution must be > 0");
    if (w.contains("width_m")) ep.map.width_m = w["width_m"].get<double>();
    if (w.contains("height_m")) ep.map.height_m = w["height_m"].get<double>();
    if (w.contains("width_cells")) ep.map.width_m = w["width_cells"].get<int>() * ep.map.resolution;
    if (w.contains("height_cells")) ep.map.height_m = w["height_cells"].get<int>() * ep.map.resolution;
    read(w, "hall_m", ep.map.hall_m);
    read(w, "wall_m", ep.map.wall_m);
    read(w, "robots", ep.robots);
    budget_given = w.contains("budget");
    read(w, "budget", ep.budget);
    read(w, "sensor_range_m", ep.sensor.range_m);
    read(w, "ray_count", ep.sensor.ray_count);
    read(w, "launch_stagger", ep.launch_stagger);
    if (w.contains("map_seed")) {
      std::uint64_t ms = 0;
      read(w, "map_seed", ms);
      cfg.run.map_seed = ms;
    }
  }
  ep.graph.sensor_range_m = ep.sensor.range_m;
  if (!budget_given) ep.budget = EpisodeConfig::default_budget(ep.map.kind);

  if (root.contains("comms")) {
    const json& c = root["comms"];
    check_keys(c, "comms",
               {"mode", "d_comm", "p_t_dbm", "p_thresh_dbm", "pl0_db", "exponent", "wall_db",
                "d0_m", "enabled"});
    if (c.contains("mode")) ep.comms.mode = parse_mode(c["mode"].get<std::string>());
    read(c, "d_comm", ep.comms.d_comm);
    read(c, "p_t_dbm", ep.comms.p_t_dbm);
    read(c, "p_thresh_dbm", ep.comms.p_thresh_dbm);
    read(c, "pl0_db", ep.comms.pl0_db);
    read(c, "exponent", ep.comms.exponent);
    read(c, "wall_db", ep.comms.wall_db);
    read(c, "d0_m", ep.comms.d0_m);
    read(c, "enabled", ep.comms_enabled);
  }

  if (root.contains("graph")) {
    const json& g = root["graph"];
    check_keys(g, "graph",
               {"lattice_m", "k", "box_half_m", "cluster_radius_m", "merge_radius_m",
                "prune_period", "max_edge_m"});
    read(g, "lattice_m", ep.graph.lattice_m);
    read(g, "k", ep.graph.k);
    read(g, "box_half_m", ep.graph.box_half_m);
    read(g, "cluster_radius_m", ep.graph.cluster_radius_m);
    read(g, "merge_radius_m", ep.graph.merge_radius_m);
    read(g, "prune_period", ep.graph.prune_period);
    read(g, "max_edge_m", ep.graph.max_edge_m);
  }

  if (root.contains("reward")) {
    const json& r = root["reward"];
    check_keys(r, "reward",
               {"alpha", "r_c", "gamma", "surplus_min_delta", "surplus_s_min", "surplus_enabled",
                "utility_cap"});
    if (r.contains("alpha")) {
      const json& a = r["alpha"];
      if (!a.is_array() || a.size() != 4) throw ConfigError("config: reward.alpha needs 4 numbers");
      ep.reward.alpha_frontiers = a[0].get<double>();
      ep.reward.alpha_distance = a[1].get<double>();
      ep.reward.alpha_team = a[2].get<double>();
      ep.reward.alpha_surplus = a[3].get<double>();
    }
    read(r, "r_c", ep.reward.completion);
    read(r, "gamma", ep.reward.gamma);
    read(r, "surplus_min_delta", ep.surplus.min_delta_cells);
    read(r, "surplus_s_min", ep.surplus.s_min);
    read(r, "surplus_enabled", ep.surplus.enabled);
    read(r, "utility_cap", ep.utility_cap);
  }

  if (root.contains("run")) {
    const json& r = root["run"];
    check_keys(r, "run", {"repetitions", "seed", "timing", "trajectories", "policy"});
    read(r, "repetitions", cfg.run.repetitions);
    read(r, "seed", cfg.run.seed);
    read(r, "timing", cfg.run.timing);
    read(r, "trajectories", cfg.run.write_trajectories);
    if (r.contains("policy")) {
      const json& p = r["policy"];
      check_keys(p, "run.policy", {"kind", "threshold", "period", "weights", "sample"});
      read(p, "kind", cfg.policy.kind);
      if (p.contains("threshold")) {
        const json& t = p["threshold"];
        if (t.is_string() && (t == "inf" || t == "infinity")) {
          cfg.policy.pursuit_threshold = std::numeric_limits<double>::infinity();
        } else {
          read(p, "threshold", cfg.policy.pursuit_threshold);
        }
      }
      read(p, "period", cfg.policy.rendezvous_period);
      read(p, "weights", cfg.policy.weights);
      read(p, "sample", cfg.policy.sample);
    }
  }
  if (cfg.run.repetitions < 1) throw ConfigError("config: run.repetitions must be >= 1");
  // Map size must be checkable before any run starts.
  if (ep.map.width_cells() < kMinMapCells || ep.map.height_cells() < kMinMapCells) {
    throw ConfigError("config: map must be at least 20x20 cells");
  }
  try {
    ep.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  try {
    return parse_impl(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  const EpisodeConfig& ep = cfg.episode;
  json root;
  root["world"] = {{"kind", std::string(to_string(ep.map.kind))},
                   {"width_m", ep.map.width_m.value_or(ep.map.default_width_m())},
                   {"height_m", ep.map.height_m.value_or(ep.map.default_height_m())},
                   {"resolution", ep.map.resolution},
                   {"hall_m", ep.map.hall_m},
                   {"wall_m", ep.map.wall_m},
                   {"robots", ep.robots},
                   {"budget", ep.budget},
                   {"sensor_range_m", ep.sensor.range_m},
                   {"ray_count", ep.sensor.ray_count},
                   {"launch_stagger", ep.launch_stagger}};
  if (cfg.run.map_seed) root["world"]["map_seed"] = *cfg.run.map_seed;
  root["comms"] = {{"mode", ep.comms.mode == CommsMode::Proximity ? "proximity" : "signal"},
                   {"d_comm", ep.comms.d_comm},
                   {"p_t_dbm", ep.comms.p_t_dbm},
                   {"p_thresh_dbm", ep.comms.p_thresh_dbm},
                   {"pl0_db", ep.comms.pl0_db},
                   {"exponent", ep.comms.exponent},
                   {"wall_db", ep.comms.wall_db},
                   {"d0_m", ep.comms.d0_m},
                   {"enabled", ep.comms_enabled}};
  root["graph"] = {{"lattice_m", ep.graph.lattice_m},
                   {"k", ep.graph.k},
                   {"box_half_m", ep.graph.box_half_m},
                   {"cluster_radius_m", ep.graph.cluster_radius_m},
                   {"merge_radius_m", ep.graph.merge_radius_m},
                   {"prune_period", ep.graph.prune_period},
                   {"max_edge_m", ep.graph.max_edge_m}};
  root["reward"] = {{"alpha",
                     {ep.reward.alpha_frontiers, ep.reward.alpha_distance, ep.reward.alpha_team,
                      ep.reward.alpha_surplus}},
                    {"r_c", ep.reward.completion},
                    {"gamma", ep.reward.gamma},
                    {"surplus_min_delta", ep.surplus.min_delta_cells},
                    {"surplus_s_min", ep.surplus.s_min},
                    {"surplus_enabled", ep.surplus.enabled},
                    {"utility_cap", ep.utility_cap}};
  json policy = {{"kind", cfg.policy.kind},
                 {"period", cfg.policy.rendezvous_period},
                 {"weights", cfg.policy.weights},
                 {"sample", cfg.policy.sample}};
  if (std::isinf(cfg.policy.pursuit_threshold)) {
    policy["threshold"] = "inf";
  } else {
    policy["threshold"] = cfg.policy.pursuit_threshold;
  }
  root["run"] = {{"repetitions", cfg.run.repetitions},
                 {"seed", cfg.run.seed},
                 {"timing", cfg.run.timing},
                 {"trajectories", cfg.run.write_trajectories},
                 {"policy", policy}};
  return root.dump(2) + "\n";
}

}  // namespace mrx
