#include "mrx/policy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mrx {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const RowMat>;
using MapM = Eigen::Map<RowMat>;
using VecC = Eigen::Map<const Eigen::VectorXd>;
using VecM = Eigen::Map<Eigen::VectorXd>;

constexpr double kLnEps = 1e-5;

struct LayerView {
  std::size_t Wq, Wk, Wv, ln1g, ln1b, W1, b1, W2, b2, ln2g, ln2b;
};

// Offsets of every block, resolved once per shape.
struct Offsets {
  std::size_t inW, inb;
  std::vector<LayerView> layers;
  std::size_t dWq, dWk, dWv, dWp, dbp, pWq, pWk, vw, vb;

  explicit Offsets(const PolicyShape& s) {
    const auto lay = parameter_layout(s);
    std::size_t i = 0;
    auto next = [&]() { return lay[i++].offset; };
    inW = next();
    inb = next();
    for (int l = 0; l < s.layers; ++l) {
      LayerView v{};
      v.Wq = next();
      v.Wk = next();
      v.Wv = next();
      v.ln1g = next();
      v.ln1b = next();
      v.W1 = next();
      v.b1 = next();
      v.W2 = next();
      v.b2 = next();
      v.ln2g = next();
      v.ln2b = next();
      layers.push_back(v);
    }
    dWq = next();
    dWk = next();
    dWv = next();
    dWp = next();
    dbp = next();
    pWq = next();
    pWk = next();
    vw = next();
    vb = next();
  }
};

struct Params {
  const PolicyShape& s;
  const double* p;
  Offsets off;

  Params(const PolicyShape& shape, std::span<const double> params)
      : s(shape), p(params.data()), off(shape) {
    if (params.size() != shape.parameter_count()) {
      throw std::invalid_argument("policy: parameter vector does not match shape");
    }
  }
  MapC mat(std::size_t o, int r, int c) const { return MapC(p + o, r, c); }
  VecC vec(std::size_t o, int n) const { return VecC(p + o, n); }
};

struct Grads {
  double* g;
  MapM mat(std::size_t o, int r, int c) const { return MapM(g + o, r, c); }
  VecM vec(std::size_t o, int n) const { return VecM(g + o, n); }
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct LnCache {
  Eigen::MatrixXd xhat;
  Eigen::VectorXd inv;
};

Eigen::MatrixXd layer_norm(const Eigen::MatrixXd& z, const VecC& g, const VecC& b, LnCache& c) {
  const Eigen::Index n = z.rows();
  const Eigen::Index d = z.cols();
  c.xhat.resize(n, d);
  c.inv.resize(n);
  Eigen::MatrixXd y(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = z.row(i).mean();
    const double var = (z.row(i).array() - mu).square().mean();
    c.inv(i) = 1.0 / std::sqrt(var + kLnEps);
    c.xhat.row(i) = (z.row(i).array() - mu) * c.inv(i);
    y.row(i) = c.xhat.row(i).array() * g.transpose().array() + b.transpose().array();
  }
  return y;
}

Eigen::MatrixXd layer_norm_backward(const Eigen::MatrixXd& dy, const LnCache& c, const VecC& g,
                                    VecM dg, VecM db) {
  const Eigen::Index n = dy.rows();
  Eigen::MatrixXd dz(n, dy.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    dg += (dy.row(i).array() * c.xhat.row(i).array()).matrix().transpose();
    db += dy.row(i).transpose();
    const Eigen::RowVectorXd dx = dy.row(i).array() * g.transpose().array();
    const double m1 = dx.mean();
    const double m2 = (dx.array() * c.xhat.row(i).array()).mean();
    dz.row(i) = c.inv(i) * (dx.array() - m1 - c.xhat.row(i).array() * m2);
  }
  return dz;
}

struct LayerCache {
  Eigen::MatrixXd h_in, q, k, v, att, u, silu, h1;
  LnCache ln1, ln2;
  std::vector<std::vector<double>> a;
};

struct EncoderCache {
  Eigen::MatrixXd x;
  std::vector<LayerCache> layers;
  Eigen::MatrixXd out;
};

// Attention neighbourhood of vertex i: itself first, then its neighbours.
template <typename F>
void for_each_slot(const GraphInput& in, std::size_t i, F&& f) {
  f(std::size_t{0}, i);
  std::size_t s = 1;
  for (std::size_t j : in.neighbors[i]) f(s++, j);
}

void check_input(const GraphInput& in, int features) {
  const auto n = static_cast<std::size_t>(in.features.rows());
  if (n == 0) throw std::invalid_argument("encode: graph has no vertices");
  if (in.features.cols() != features) {
    throw std::invalid_argument("encode: expected " + std::to_string(features) + " features");
  }
  if (!in.features.allFinite()) throw std::invalid_argument("encode: non-finite input feature");
  if (in.neighbors.size() != n) throw std::invalid_argument("encode: adjacency size mismatch");
  for (const auto& nb : in.neighbors) {
    for (std::size_t j : nb) {
      if (j >= n) throw std::invalid_argument("encode: neighbour index out of range");
    }
  }
}

Eigen::MatrixXd encode_impl(const Params& P, const GraphInput& in, EncoderCache* cache,
                            AttentionTrace* trace) {
  check_input(in, P.s.features);
  const int d = P.s.d;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const Eigen::Index n = in.features.rows();
  Eigen::MatrixXd h = in.features * P.mat(P.off.inW, d, P.s.features).transpose();
  h.rowwise() += P.vec(P.off.inb, d).transpose();
  if (cache) cache->x = in.features;
  if (trace) trace->clear();

  for (const LayerView& L : P.off.layers) {
    LayerCache lc;
    lc.h_in = h;
    lc.q = h * P.mat(L.Wq, d, d).transpose();
    lc.k = h * P.mat(L.Wk, d, d).transpose();
    lc.v = h * P.mat(L.Wv, d, d).transpose();
    lc.att = Eigen::MatrixXd::Zero(n, d);
    lc.a.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      std::vector<double>& w = lc.a[ui];
      w.assign(in.neighbors[ui].size() + 1, 0.0);
      double mx = -std::numeric_limits<double>::infinity();
      for_each_slot(in, ui, [&](std::size_t s, std::size_t j) {
        w[s] = lc.q.row(i).dot(lc.k.row(static_cast<Eigen::Index>(j))) * scale;
        mx = std::max(mx, w[s]);
      });
      double sum = 0.0;
      for (double& x : w) {
        x = std::exp(x - mx);
        sum += x;
      }
      for (double& x : w) x /= sum;
      for_each_slot(in, ui, [&](std::size_t s, std::size_t j) {
        lc.att.row(i) += w[s] * lc.v.row(static_cast<Eigen::Index>(j));
      });
    }
    if (trace) trace->push_back(lc.a);
    lc.h1 = layer_norm(h + lc.att, P.vec(L.ln1g, d), P.vec(L.ln1b, d), lc.ln1);
    lc.u = lc.h1 * P.mat(L.W1, 2 * d, d).transpose();
    lc.u.rowwise() += P.vec(L.b1, 2 * d).transpose();
    lc.silu = lc.u.unaryExpr([](double x) { return x * sigmoid(x); });
    Eigen::MatrixXd f = lc.silu * P.mat(L.W2, d, 2 * d).transpose();
    f.rowwise() += P.vec(L.b2, d).transpose();
    h = layer_norm(lc.h1 + f, P.vec(L.ln2g, d), P.vec(L.ln2b, d), lc.ln2);
    if (cache) cache->layers.push_back(std::move(lc));
  }
  if (cache) cache->out = h;
  return h;
}

// Returns dL/dX is not needed; accumulates parameter gradients only.
void encode_backward(const Params& P, const GraphInput& in, const EncoderCache& c,
                     Eigen::MatrixXd dh, const Grads& G) {
  const int d = P.s.d;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const Eigen::Index n = dh.rows();
  for (std::size_t li = P.off.layers.size(); li-- > 0;) {
    const LayerView& L = P.off.layers[li];
    const LayerCache& lc = c.layers[li];
    const Eigen::MatrixXd dz2 = layer_norm_backward(dh, lc.ln2, P.vec(L.ln2g, d),
                                                    G.vec(L.ln2g, d), G.vec(L.ln2b, d));
    // z2 = h1 + silu(u) W2^T + b2
    Eigen::MatrixXd dh1 = dz2;
    G.mat(L.W2, d, 2 * d) += dz2.transpose() * lc.silu;
    G.vec(L.b2, d) += dz2.colwise().sum().transpose();
    Eigen::MatrixXd dsilu = dz2 * P.mat(L.W2, d, 2 * d);
    Eigen::MatrixXd du = dsilu;
    for (Eigen::Index i = 0; i < du.rows(); ++i) {
      for (Eigen::Index j = 0; j < du.cols(); ++j) {
        const double x = lc.u(i, j);
        const double s = sigmoid(x);
        du(i, j) = dsilu(i, j) * s * (1.0 + x * (1.0 - s));
      }
    }
    G.mat(L.W1, 2 * d, d) += du.transpose() * lc.h1;
    G.vec(L.b1, 2 * d) += du.colwise().sum().transpose();
    dh1 += du * P.mat(L.W1, 2 * d, d);
    const Eigen::MatrixXd dz1 = layer_norm_backward(dh1, lc.ln1, P.vec(L.ln1g, d),
                                                    G.vec(L.ln1g, d), G.vec(L.ln1b, d));
    // z1 = h + att
    Eigen::MatrixXd dprev = dz1;
    Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(n, d);
    Eigen::MatrixXd dk = Eigen::MatrixXd::Zero(n, d);
    Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const std::vector<double>& w = lc.a[ui];
      std::vector<double> da(w.size());
      double dot = 0.0;
      for_each_slot(in, ui, [&](std::size_t s, std::size_t j) {
        const auto ej = static_cast<Eigen::Index>(j);
        dv.row(ej) += w[s] * dz1.row(i);
        da[s] = dz1.row(i).dot(lc.v.row(ej));
        dot += w[s] * da[s];
      });
      for_each_slot(in, ui, [&](std::size_t s, std::size_t j) {
        const auto ej = static_cast<Eigen::Index>(j);
        const double ds = w[s] * (da[s] - dot) * scale;
        dq.row(i) += ds * lc.k.row(ej);
        dk.row(ej) += ds * lc.q.row(i);
      });
    }
    G.mat(L.Wq, d, d) += dq.transpose() * lc.h_in;
    G.mat(L.Wk, d, d) += dk.transpose() * lc.h_in;
    G.mat(L.Wv, d, d) += dv.transpose() * lc.h_in;
    dprev += dq * P.mat(L.Wq, d, d) + dk * P.mat(L.Wk, d, d) + dv * P.mat(L.Wv, d, d);
    dh = std::move(dprev);
  }
  G.mat(P.off.inW, d, P.s.features) += dh.transpose() * c.x;
  G.vec(P.off.inb, d) += dh.colwise().sum().transpose();
}

struct DecoderCache {
  Eigen::VectorXd hc, qc, att, cat, e, pq, b, t, z, pi;
  Eigen::MatrixXd kc, vc, pk;
  double value = 0.0;
};

PolicyOutput decode_impl(const Params& P, const Eigen::MatrixXd& h, std::size_t current,
                         std::span<const std::size_t> candidates, DecoderCache* cache) {
  if (candidates.empty()) throw std::invalid_argument("decode: no unmasked candidates");
  if (static_cast<int>(candidates.size()) > P.s.k) {
    throw std::invalid_argument("decode: more candidates than pointer slots");
  }
  const auto n = static_cast<std::size_t>(h.rows());
  if (current >= n) throw std::invalid_argument("decode: current vertex out of range");
  for (std::size_t c : candidates) {
    if (c >= n) throw std::invalid_argument("decode: candidate out of range");
  }
  const int d = P.s.d;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const auto m = static_cast<Eigen::Index>(candidates.size());
  DecoderCache local;
  DecoderCache& c = cache ? *cache : local;
  c.hc = h.row(static_cast<Eigen::Index>(current)).transpose();
  Eigen::MatrixXd hcand(m, d);
  for (Eigen::Index j = 0; j < m; ++j) hcand.row(j) = h.row(static_cast<Eigen::Index>(candidates[static_cast<std::size_t>(j)]));
  c.qc = P.mat(P.off.dWq, d, d) * c.hc;
  c.kc = hcand * P.mat(P.off.dWk, d, d).transpose();
  c.vc = hcand * P.mat(P.off.dWv, d, d).transpose();
  Eigen::VectorXd s = c.kc * c.qc * scale;
  c.b = (s.array() - s.maxCoeff()).exp();
  c.b /= c.b.sum();
  c.att = c.vc.transpose() * c.b;
  c.cat.resize(2 * d);
  c.cat << c.hc, c.att;
  c.e = P.mat(P.off.dWp, d, 2 * d) * c.cat + P.vec(P.off.dbp, d);
  c.pq = P.mat(P.off.pWq, d, d) * c.e;
  c.pk = hcand * P.mat(P.off.pWk, d, d).transpose();
  c.t = c.pk * c.pq * scale;
  c.z = c.t.array().tanh() * kPointerClip;
  c.pi = (c.z.array() - c.z.maxCoeff()).exp();
  c.pi /= c.pi.sum();
  c.value = P.vec(P.off.vw, d).dot(c.e) + P.p[P.off.vb];

  PolicyOutput out;
  const auto k = static_cast<std::size_t>(P.s.k);
  out.probs.assign(k, 0.0);
  out.logits.assign(k, -std::numeric_limits<double>::infinity());
  out.mask.assign(k, true);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    out.probs[uj] = c.pi(j);
    out.logits[uj] = c.z(j);
    out.mask[uj] = false;
  }
  out.value = c.value;
  return out;
}

}  // namespace

Eigen::VectorXd feature_row(const AugmentedNode& node) {
  Eigen::VectorXd f(AugmentedNode::kFeatureCount);
  f << node.x, node.y, node.utility, node.guidepost, node.indicator, node.surplus;
  return f;
}

GraphInput make_input(const Observation& obs) {
  GraphInput in;
  in.features.resize(static_cast<Eigen::Index>(obs.size()), AugmentedNode::kFeatureCount);
  for (std::size_t v = 0; v < obs.size(); ++v) {
    in.features.row(static_cast<Eigen::Index>(v)) = feature_row(obs.nodes[v]).transpose();
  }
  in.neighbors = obs.neighbors;
  in.current = obs.current;
  in.candidates = obs.candidates;
  return in;
}

Eigen::MatrixXd encode(const PolicyNet& net, const GraphInput& input, AttentionTrace* trace) {
  const Params P(net.shape, net.params);
  return encode_impl(P, input, nullptr, trace);
}

PolicyOutput decode(const PolicyNet& net, const Eigen::MatrixXd& embeddings,
                    std::size_t current, std::span<const std::size_t> candidates) {
  const Params P(net.shape, net.params);
  if (embeddings.cols() != net.shape.d) throw std::invalid_argument("decode: width mismatch");
  return decode_impl(P, embeddings, current, candidates, nullptr);
}

PolicyOutput evaluate(const PolicyNet& net, const GraphInput& input) {
  const Params P(net.shape, net.params);
  const Eigen::MatrixXd h = encode_impl(P, input, nullptr, nullptr);
  return decode_impl(P, h, input.current, input.candidates, nullptr);
}

int select_action(const PolicyOutput& out, SelectMode mode, std::mt19937_64& rng) {
  int best = -1;
  int last = -1;
  for (std::size_t i = 0; i < out.probs.size(); ++i) {
    if (out.mask[i]) continue;
    last = static_cast<int>(i);
    if (best < 0 || out.probs[i] > out.probs[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  if (best < 0) throw std::invalid_argument("select_action: every slot is masked");
  if (mode == SelectMode::Greedy) return best;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < out.probs.size(); ++i) {
    if (out.mask[i]) continue;
    acc += out.probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return last;
}

LossValue policy_loss(const PolicyShape& shape, std::span<const double> params,
                      const GraphInput& input, const LossSpec& spec, std::span<double> grad) {
  const Params P(shape, params);
  EncoderCache ec;
  DecoderCache dc;
  const Eigen::MatrixXd h = encode_impl(P, input, &ec, nullptr);
  decode_impl(P, h, input.current, input.candidates, &dc);
  const auto m = dc.pi.size();
  if (spec.action < 0 || spec.action >= m) throw std::invalid_argument("policy_loss: bad action");

  LossValue lv;
  const Eigen::VectorXd logp = dc.pi.array().log();
  const double entropy = -(dc.pi.array() * logp.array()).sum();
  lv.policy = -spec.advantage * logp(spec.action);
  lv.value = spec.value_coef * (dc.value - spec.target_return) * (dc.value - spec.target_return);
  lv.entropy = entropy;
  lv.total = lv.policy + lv.value - spec.entropy_coef * entropy;
  if (grad.empty()) return lv;
  if (grad.size() != params.size()) throw std::invalid_argument("policy_loss: gradient size");

  const int d = shape.d;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const Grads G{grad.data()};

  Eigen::VectorXd dz = spec.advantage * dc.pi;
  dz(spec.action) -= spec.advantage;
  dz.array() += spec.entropy_coef * dc.pi.array() * (logp.array() + entropy);
  const Eigen::VectorXd dt =
      dz.array() * kPointerClip * (1.0 - dc.t.array().tanh().square());

  const double dvalue = 2.0 * spec.value_coef * (dc.value - spec.target_return);
  G.vec(P.off.vw, d) += dvalue * dc.e;
  grad[P.off.vb] += dvalue;
  Eigen::VectorXd de = dvalue * P.vec(P.off.vw, d);

  const Eigen::VectorXd dpq = dc.pk.transpose() * dt * scale;
  const Eigen::MatrixXd dpk = dt * dc.pq.transpose() * scale;
  G.mat(P.off.pWq, d, d) += dpq * dc.e.transpose();
  de += P.mat(P.off.pWq, d, d).transpose() * dpq;

  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(h.rows(), d);
  Eigen::MatrixXd hcand(m, d);
  for (Eigen::Index j = 0; j < m; ++j) {
    hcand.row(j) = h.row(static_cast<Eigen::Index>(input.candidates[static_cast<std::size_t>(j)]));
  }
  G.mat(P.off.pWk, d, d) += dpk.transpose() * hcand;
  Eigen::MatrixXd dhcand = dpk * P.mat(P.off.pWk, d, d);

  G.mat(P.off.dWp, d, 2 * d) += de * dc.cat.transpose();
  G.vec(P.off.dbp, d) += de;
  const Eigen::VectorXd dcat = P.mat(P.off.dWp, d, 2 * d).transpose() * de;
  Eigen::VectorXd dhc = dcat.head(d);
  const Eigen::VectorXd datt = dcat.tail(d);

  const Eigen::MatrixXd dvc = dc.b * datt.transpose();
  const Eigen::VectorXd db = dc.vc * datt;
  const Eigen::VectorXd ds = dc.b.array() * (db.array() - dc.b.dot(db)) * scale;
  const Eigen::VectorXd dqc = dc.kc.transpose() * ds;
  const Eigen::MatrixXd dkc = ds * dc.qc.transpose();
  G.mat(P.off.dWq, d, d) += dqc * dc.hc.transpose();
  G.mat(P.off.dWk, d, d) += dkc.transpose() * hcand;
  G.mat(P.off.dWv, d, d) += dvc.transpose() * hcand;
  dhc += P.mat(P.off.dWq, d, d).transpose() * dqc;
  dhcand += dkc * P.mat(P.off.dWk, d, d) + dvc * P.mat(P.off.dWv, d, d);

  dh.row(static_cast<Eigen::Index>(input.current)) += dhc.transpose();
  for (Eigen::Index j = 0; j < m; ++j) {
    dh.row(static_cast<Eigen::Index>(input.candidates[static_cast<std::size_t>(j)])) += dhcand.row(j);
  }
  encode_backward(P, input, ec, std::move(dh), G);
  return lv;
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-4});
}

GraphInput random_graph_input(std::mt19937_64& rng, int vertices, int features, int k) {
  GraphInput in;
  const auto n = static_cast<std::size_t>(std::max(1, vertices));
  std::normal_distribution<double> normal(0.0, 1.0);
  in.features.resize(static_cast<Eigen::Index>(n), features);
  for (Eigen::Index i = 0; i < in.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < in.features.cols(); ++j) in.features(i, j) = normal(rng);
  }
  in.neighbors.assign(n, {});
  auto link = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    if (std::find(in.neighbors[a].begin(), in.neighbors[a].end(), b) != in.neighbors[a].end()) return;
    in.neighbors[a].push_back(b);
    in.neighbors[b].push_back(a);
  };
  // Random spanning tree plus extra edges.
  for (std::size_t v = 1; v < n; ++v) {
    link(v, std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
  }
  std::bernoulli_distribution extra(0.25);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (extra(rng)) link(a, b);
    }
  }
  in.current = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  in.candidates = in.neighbors[in.current];
  std::shuffle(in.candidates.begin(), in.candidates.end(), rng);
  if (static_cast<int>(in.candidates.size()) > k) in.candidates.resize(static_cast<std::size_t>(k));
  if (in.candidates.empty()) in.candidates.push_back(in.current);
  return in;
}

GradCheckReport gradient_check(const PolicyShape& shape, std::uint64_t seed, int graphs,
                               int max_vertices, double step) {
  shape.validate();
  std::mt19937_64 rng(seed);
  GradCheckReport rep;
  for (int g = 0; g < graphs; ++g) {
    PolicyNet net = PolicyNet::initialize(shape, rng());
    // Perturb gains and biases away from their tidy initial values.
    std::normal_distribution<double> jitter(0.0, 0.1);
    for (double& p : net.params) p += jitter(rng);
    const int n = std::uniform_int_distribution<int>(2, std::max(2, max_vertices))(rng);
    const GraphInput in = random_graph_input(rng, n, shape.features, shape.k);
    LossSpec spec;
    spec.action = std::uniform_int_distribution<int>(
        0, static_cast<int>(in.candidates.size()) - 1)(rng);
    spec.advantage = std::normal_distribution<double>(0.0, 1.0)(rng);
    spec.target_return = std::normal_distribution<double>(0.0, 1.0)(rng);
    spec.value_coef = 0.5;
    spec.entropy_coef = 0.01;

    std::vector<double> analytic(net.params.size(), 0.0);
    policy_loss(shape, net.params, in, spec, analytic);
    std::vector<double> theta = net.params;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double keep = theta[i];
      theta[i] = keep + step;
      const double up = policy_loss(shape, theta, in, spec, {}).total;
      theta[i] = keep - step;
      const double down = policy_loss(shape, theta, in, spec, {}).total;
      theta[i] = keep;
      const double numeric = (up - down) / (2.0 * step);
      rep.max_rel_error = std::max(rep.max_rel_error, relative_error(analytic[i], numeric));
      rep.max_abs_error = std::max(rep.max_abs_error, std::abs(analytic[i] - numeric));
      ++rep.checked;
    }
    ++rep.graphs;
  }
  return rep;
}

}  // namespace mrx
