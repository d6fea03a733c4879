#include "mrx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mrx {

MeanStdev mean_stdev(std::span<const double> values) {
  MeanStdev out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.stdev = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

MetricsReport compute_metrics(std::span<const TrajectoryRow> rows, int robots, bool success,
                              double plan_ms) {
  if (robots < 1) throw std::invalid_argument("compute_metrics: robots must be >= 1");
  MetricsReport m;
  m.success = success;
  m.plan_ms = plan_ms;
  const auto n = static_cast<std::size_t>(robots);
  std::vector<double> travelled(n, 0.0);
  std::vector<double> final_area(n, 0.0);
  std::map<int, std::vector<double>> coverage_by_step;
  for (const TrajectoryRow& r : rows) {
    if (r.robot < 0 || r.robot >= robots) throw std::invalid_argument("compute_metrics: bad robot id");
    const auto i = static_cast<std::size_t>(r.robot);
    travelled[i] += r.travelled;
    m.steps = std::max(m.steps, r.step);
    auto& cov = coverage_by_step[r.step];
    cov.resize(n, 0.0);
    cov[i] = 100.0 * r.coverage;
  }
  for (const TrajectoryRow& r : rows) {
    if (r.step == m.steps) final_area[static_cast<std::size_t>(r.robot)] = r.known_m2;
  }
  m.makespan = m.steps;
  m.known_area_m2 = mean_stdev(final_area).mean;
  m.distance_m = mean_stdev(travelled).mean;
  m.longest_path_m = *std::max_element(travelled.begin(), travelled.end());
  m.eta_t = m.steps > 0 ? m.known_area_m2 / m.steps : 0.0;
  m.eta_d = m.distance_m > 0.0 ? m.known_area_m2 / m.distance_m : 0.0;
  double acc = 0.0;
  int count = 0;
  for (const auto& [step, cov] : coverage_by_step) {
    if (step < 1) continue;
    acc += mean_stdev(cov).stdev;
    ++count;
  }
  m.sigma_pct = count > 0 ? acc / count : 0.0;
  return m;
}

}  // namespace mrx
