#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrx {

/// Network dimensions. `k` is the candidate slot count of the pointer head.
struct PolicyShape {
  int d = 64;
  int layers = 3;
  int k = 8;
  int features = 6;

  void validate() const;
  std::size_t parameter_count() const;
  friend bool operator==(const PolicyShape&, const PolicyShape&) = default;
};

/// A named parameter block inside the flat parameter vector. Matrices are
/// row-major, `rows x cols`; vectors have cols == 1.
struct ParamBlock {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::size_t offset = 0;
  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};

/// Flat parameter order:
///   in.W (d x F), in.b (d)
///   per encoder layer l:
///     enc{l}.Wq, enc{l}.Wk, enc{l}.Wv (d x d), enc{l}.ln1.g, enc{l}.ln1.b (d),
///     enc{l}.W1 (2d x d), enc{l}.b1 (2d), enc{l}.W2 (d x 2d), enc{l}.b2 (d),
///     enc{l}.ln2.g, enc{l}.ln2.b (d)
///   dec.Wq, dec.Wk, dec.Wv (d x d), dec.Wp (d x 2d), dec.bp (d)
///   ptr.Wq, ptr.Wk (d x d)
///   value.w (d), value.b (1)
std::vector<ParamBlock> parameter_layout(const PolicyShape& shape);

class WeightsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Policy parameters. Values are kept exactly representable as 32-bit
/// floats so the on-disk format round-trips bit for bit.
struct PolicyNet {
  PolicyShape shape;
  std::vector<double> params;

  /// Xavier-uniform matrices, unit norm gains, zero biases.
  static PolicyNet initialize(const PolicyShape& shape, std::uint64_t seed);
  /// Rounds every parameter to the nearest float.
  void quantize();
  bool all_finite() const;
};

inline constexpr int kWeightsVersion = 1;

/// Text header `MRXW <version> <d> <layers> <k> <features> <count>\n`
/// followed by `count` little-endian float32 values in layout order.
void write_weights(std::ostream& os, const PolicyNet& net);
PolicyNet read_weights(std::istream& is);
void save_weights(const PolicyNet& net, const std::filesystem::path& path);
PolicyNet load_weights(const std::filesystem::path& path);

}  // namespace mrx
