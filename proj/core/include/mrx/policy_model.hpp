#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mrx/env.hpp"
#include "mrx/policy_net.hpp"

namespace mrx {

/// Policy input: per-vertex features, adjacency (without self loops), the
/// current vertex and the candidate vertices in slot order.
struct GraphInput {
  Eigen::MatrixXd features;
  std::vector<std::vector<std::size_t>> neighbors;
  std::size_t current = 0;
  std::vector<std::size_t> candidates;
};

GraphInput make_input(const Observation& obs);

/// Feature row order: x, y, utility, guidepost, indicator, surplus.
Eigen::VectorXd feature_row(const AugmentedNode& node);

struct PolicyOutput {
  /// One entry per candidate slot; masked slots hold 0.
  std::vector<double> probs;
  std::vector<double> logits;
  std::vector<bool> mask;
  double value = 0.0;
};

/// Per layer, per vertex: attention weights over [self, neighbours...].
using AttentionTrace = std::vector<std::vector<std::vector<double>>>;

/// Edge-masked self-attention encoder. Throws std::invalid_argument on an
/// empty graph or non-finite features.
Eigen::MatrixXd encode(const PolicyNet& net, const GraphInput& input,
                       AttentionTrace* trace = nullptr);

/// Cross-attention of the current vertex over the candidates, projection to
/// the enhanced current feature, tanh-clipped pointer logits and softmax
/// over the real candidates. Slots beyond the candidate list (up to the
/// net's k) are masked. Throws std::invalid_argument without candidates.
PolicyOutput decode(const PolicyNet& net, const Eigen::MatrixXd& embeddings,
                    std::size_t current, std::span<const std::size_t> candidates);

PolicyOutput evaluate(const PolicyNet& net, const GraphInput& input);

enum class SelectMode { Sample, Greedy };

/// Sample draws one uniform variate from `rng` and inverts the cumulative
/// distribution; Greedy is argmax with the lowest index winning ties.
int select_action(const PolicyOutput& out, SelectMode mode, std::mt19937_64& rng);

inline constexpr double kPointerClip = 10.0;

struct LossSpec {
  int action = 0;
  double advantage = 0.0;
  double target_return = 0.0;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
};

struct LossValue {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
};

/// Actor-critic loss for one decision:
///   -A log pi(a) + c_v (V - R)^2 - c_e H(pi)
/// When `grad` is non-empty the analytic gradient is added into it.
LossValue policy_loss(const PolicyShape& shape, std::span<const double> params,
                      const GraphInput& input, const LossSpec& spec, std::span<double> grad);

/// |a - b| / max(|a|, |b|, 1e-4).
double relative_error(double a, double b);

struct GradCheckReport {
  int graphs = 0;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

/// Compares analytic gradients with central differences on random graphs
/// of 2..max_vertices vertices, every parameter, in double precision.
GradCheckReport gradient_check(const PolicyShape& shape, std::uint64_t seed, int graphs = 20,
                               int max_vertices = 12, double step = 1e-5);

/// Random connected graph input for tests and checks.
GraphInput random_graph_input(std::mt19937_64& rng, int vertices, int features, int k);

}  // namespace mrx
