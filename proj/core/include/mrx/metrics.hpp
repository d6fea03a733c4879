#pragma once

#include <span>
#include <vector>

#include "mrx/env.hpp"

namespace mrx {

/// Per-run exploration metrics.
///   A     = mean over robots of final known-free area (m^2)
///   D     = mean over robots of distance travelled (m)
///   eta_t = A / steps
///   eta_d = A / D (0 when nobody moved)
///   sigma = stdev over robots of belief coverage (% of truth free area),
///           population formula, averaged over decision steps 1..T
struct MetricsReport {
  int steps = 0;
  bool success = false;
  double known_area_m2 = 0.0;
  double distance_m = 0.0;
  double eta_t = 0.0;
  double eta_d = 0.0;
  double sigma_pct = 0.0;
  /// Same statistic over self-sensed area at the final step.
  double sigma_self_pct = 0.0;
  /// NaN when not measured.
  double plan_ms = 0.0;
  /// Decision steps until termination.
  int makespan = 0;
  /// Longest single-robot path length (m).
  double longest_path_m = 0.0;
};

MetricsReport compute_metrics(std::span<const TrajectoryRow> rows, int robots, bool success,
                              double plan_ms);

struct MeanStdev {
  double mean = 0.0;
  double stdev = 0.0;
};

/// Population standard deviation.
MeanStdev mean_stdev(std::span<const double> values);

}  // namespace mrx
