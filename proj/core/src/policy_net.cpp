#include "mrx/policy_net.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace mrx {

void PolicyShape::validate() const {
  if (d < 8) throw std::invalid_argument("policy: d must be >= 8");
  if (layers < 1) throw std::invalid_argument("policy: layer count must be >= 1");
  if (k < 1) throw std::invalid_argument("policy: k must be >= 1");
  if (features < 1) throw std::invalid_argument("policy: feature count must be >= 1");
}

std::vector<ParamBlock> parameter_layout(const PolicyShape& s) {
  std::vector<ParamBlock> out;
  std::size_t off = 0;
  auto add = [&](std::string name, int rows, int cols) {
    out.push_back({std::move(name), rows, cols, off});
    off += out.back().size();
  };
  const int d = s.d;
  add("in.W", d, s.features);
  add("in.b", d, 1);
  for (int l = 0; l < s.layers; ++l) {
    const std::string p = "enc" + std::to_string(l) + ".";
    add(p + "Wq", d, d);
    add(p + "Wk", d, d);
    add(p + "Wv", d, d);
    add(p + "ln1.g", d, 1);
    add(p + "ln1.b", d, 1);
    add(p + "W1", 2 * d, d);
    add(p + "b1", 2 * d, 1);
    add(p + "W2", d, 2 * d);
    add(p + "b2", d, 1);
    add(p + "ln2.g", d, 1);
    add(p + "ln2.b", d, 1);
  }
  add("dec.Wq", d, d);
  add("dec.Wk", d, d);
  add("dec.Wv", d, d);
  add("dec.Wp", d, 2 * d);
  add("dec.bp", d, 1);
  add("ptr.Wq", d, d);
  add("ptr.Wk", d, d);
  add("value.w", d, 1);
  add("value.b", 1, 1);
  return out;
}

std::size_t PolicyShape::parameter_count() const {
  const auto layout = parameter_layout(*this);
  return layout.back().offset + layout.back().size();
}

PolicyNet PolicyNet::initialize(const PolicyShape& shape, std::uint64_t seed) {
  shape.validate();
  PolicyNet net;
  net.shape = shape;
  net.params.assign(shape.parameter_count(), 0.0);
  std::mt19937_64 rng(seed);
  for (const ParamBlock& b : parameter_layout(shape)) {
    const bool gain = b.name.ends_with(".g");
    if (b.cols == 1) {
      if (gain) std::fill_n(net.params.begin() + static_cast<std::ptrdiff_t>(b.offset), b.size(), 1.0);
      continue;
    }
    const double limit = std::sqrt(6.0 / (b.rows + b.cols));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (std::size_t i = 0; i < b.size(); ++i) net.params[b.offset + i] = u(rng);
  }
  // The value head is a vector block; give it a small random start.
  for (const ParamBlock& b : parameter_layout(shape)) {
    if (b.name != "value.w") continue;
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (std::size_t i = 0; i < b.size(); ++i) net.params[b.offset + i] = u(rng);
  }
  net.quantize();
  return net;
}

void PolicyNet::quantize() {
  for (double& p : params) p = static_cast<double>(static_cast<float>(p));
}

bool PolicyNet::all_finite() const {
  for (double p : params) {
    if (!std::isfinite(p)) return false;
  }
  return true;
}

namespace {

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
  return v;
}

}  // namespace

void write_weights(std::ostream& os, const PolicyNet& net) {
  net.shape.validate();
  if (net.params.size() != net.shape.parameter_count()) {
    throw WeightsFormatError("write_weights: parameter count does not match shape");
  }
  os << "MRXW " << kWeightsVersion << ' ' << net.shape.d << ' ' << net.shape.layers << ' '
     << net.shape.k << ' ' << net.shape.features << ' ' << net.params.size() << '\n';
  for (double p : net.params) {
    const std::uint32_t bits = to_le(std::bit_cast<std::uint32_t>(static_cast<float>(p)));
    char buf[4];
    std::memcpy(buf, &bits, 4);
    os.write(buf, 4);
  }
  if (!os) throw WeightsFormatError("write_weights: stream failure");
}

PolicyNet read_weights(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw WeightsFormatError("weights: missing header");
  std::istringstream hs(line);
  std::string magic;
  int version = 0;
  PolicyShape shape;
  long long count = -1;
  if (!(hs >> magic >> version >> shape.d >> shape.layers >> shape.k >> shape.features >> count) ||
      magic != "MRXW") {
    throw WeightsFormatError("weights: malformed header");
  }
  if (version != kWeightsVersion) {
    throw WeightsFormatError("weights: unsupported version " + std::to_string(version));
  }
  try {
    shape.validate();
  } catch (const std::invalid_argument& e) {
    throw WeightsFormatError(std::string("weights: bad shape: ") + e.what());
  }
  if (count < 0 || static_cast<std::size_t>(count) != shape.parameter_count()) {
    throw WeightsFormatError("weights: header count " + std::to_string(count) +
                             " does not match shape (" +
                             std::to_string(shape.parameter_count()) + ")");
  }
  PolicyNet net;
  net.shape = shape;
  net.params.resize(static_cast<std::size_t>(count));
  for (double& p : net.params) {
    char buf[4];
    if (!is.read(buf, 4)) throw WeightsFormatError("weights: truncated data");
    std::uint32_t bits = 0;
    std::memcpy(&bits, buf, 4);
    p = static_cast<double>(std::bit_cast<float>(to_le(bits)));
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw WeightsFormatError("weights: trailing data after parameters");
  }
  if (!net.all_finite()) throw WeightsFormatError("weights: non-finite parameter");
  return net;
}

void save_weights(const PolicyNet& net, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw WeightsFormatError("cannot open " + path.string() + " for writing");
  write_weights(os, net);
}

PolicyNet load_weights(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw WeightsFormatError("cannot open " + path.string());
  return read_weights(is);
}

}  // namespace mrx
