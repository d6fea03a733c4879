#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mrx/grid.hpp"

namespace mrx {

enum class MapKind { Empty, Simple, Corridor, Hybrid, Complex };

std::string_view to_string(MapKind kind);
/// Case-insensitive; throws std::invalid_argument for unknown names.
MapKind parse_map_kind(std::string_view name);

/// Rejected map/experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Procedural map request. Physical dimensions default per kind
/// (Corridor 160x120 m, Hybrid 125x125 m, Complex 250x250 m,
/// Empty/Simple 40x40 m) when not given.
struct MapSpec {
  MapKind kind = MapKind::Simple;
  std::uint64_t seed = 0;
  std::optional<double> width_m;
  std::optional<double> height_m;
  double resolution = 0.5;
  /// Hall width for maze-based kinds.
  double hall_m = 4.0;
  /// Wall thickness for maze-based kinds.
  double wall_m = 1.0;

  static MapSpec cells(MapKind kind, std::uint64_t seed, int width, int height,
                       double resolution = 0.5);

  double default_width_m() const;
  double default_height_m() const;
  int width_cells() const;
  int height_cells() const;
};

inline constexpr int kMinMapCells = 20;

/// Generates a ground-truth grid: border Occupied, no Unknown cells, all
/// Free cells one 4-connected component, and every Free cell covered by a
/// fully Free 3x3 block. Deterministic in the spec.
OccupancyGrid generate_map(const MapSpec& spec);

/// Number of 4-connected components of Free cells.
int free_component_count(const OccupancyGrid& grid);

}  // namespace mrx
