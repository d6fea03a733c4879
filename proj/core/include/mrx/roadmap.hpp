#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mrx/geometry.hpp"
#include "mrx/graph.hpp"
#include "mrx/grid.hpp"

namespace mrx {

struct GraphParams {
  /// Candidate viewpoint lattice spacing.
  double lattice_m = 2.0;
  /// Nearest-neighbour edge count.
  int k = 8;
  /// Sensor range d_s used for utilities.
  double sensor_range_m = 8.0;
  /// Local box half-width d_r; <= 0 means 2 * sensor_range_m.
  double box_half_m = 0.0;
  /// Frontier-center cluster radius.
  double cluster_radius_m = 10.0;
  /// Merge radius.
  double merge_radius_m = 3.0;
  /// Global pruning period in decision steps.
  int prune_period = 5;
  /// Longest edge the nearest-neighbour wiring will consider; <= 0 means
  /// sensor_range_m.
  double max_edge_m = 0.0;

  double box_half() const { return box_half_m > 0.0 ? box_half_m : 2.0 * sensor_range_m; }
  double max_edge() const { return max_edge_m > 0.0 ? max_edge_m : sensor_range_m; }
  void validate() const;
};

/// Frontier cells bucketed for range queries.
class FrontierIndex {
 public:
  FrontierIndex(const OccupancyGrid& belief, double bucket_m);

  std::size_t size() const { return cells_.size(); }
  const std::vector<Cell>& cells() const { return cells_; }

  /// Frontier cells whose centers lie within `range_m` of `pos` and are in
  /// line of sight of it on the belief.
  int visible_count(const OccupancyGrid& belief, Vec2 pos, double range_m) const;

 private:
  std::vector<Cell> cells_;
  int bucket_cells_ = 1;
  int bw_ = 0;
  int bh_ = 0;
  std::vector<std::vector<std::size_t>> buckets_;
};

/// Undirected kNN line-of-sight edges over `vertices`: each vertex proposes
/// edges to its k nearest neighbours (ties to lower index) that lie within
/// `max_edge_m` and are in line of sight; the result is the symmetrized
/// union as (a, b) pairs with a < b, sorted.
std::vector<std::pair<std::size_t, std::size_t>> knn_los_edges(
    std::span<const Vec2> vertices, const OccupancyGrid& grid, int k, double max_edge_m);

/// Adds kNN line-of-sight edges proposed by the vertices in `from` towards
/// any vertex of the graph.
void connect_knn_los(HierGraph& graph, std::span<const std::size_t> from,
                     const OccupancyGrid& grid, int k, double max_edge_m);

/// Lattice points of the box |x - x_R| <= d_r, |y - y_R| <= d_r on Free
/// cells, plus the robot position, wired by kNN line of sight, each tagged
/// with its observable frontier count.
HierGraph build_local_graph(const OccupancyGrid& belief, Vec2 robot_pos,
                            const GraphParams& params);

/// Same, reusing a prebuilt frontier index.
HierGraph build_local_graph(const OccupancyGrid& belief, Vec2 robot_pos,
                            const GraphParams& params, const FrontierIndex& frontiers);

/// Lattice point positions (cell centers) within the box around `center`.
std::vector<Vec2> lattice_points(const OccupancyGrid& grid, Vec2 center, double half_width_m,
                                 double lattice_m);

struct FrontierCenter {
  Vec2 pos;
  int utility = 0;
};

/// Greedy clustering of nonzero-utility vertices in descending utility
/// order (ties to lower index). Each unclaimed vertex seeds a cluster that
/// absorbs every unclaimed nonzero vertex within `radius_m`; the seed is the
/// cluster's center.
std::vector<FrontierCenter> frontier_centers(const HierGraph& local, double radius_m);

struct ExtendReport {
  std::size_t robot_vertex = 0;
  std::vector<std::size_t> added;
  /// Centers skipped because no Free-cell path reached them.
  std::vector<Vec2> unreachable;
};

/// Inserts the robot position and the lattice-subsampled A* paths towards
/// each center as Global vertices, then wires the new vertices by kNN line
/// of sight. Waypoints within half a lattice spacing of an existing vertex
/// reuse it.
ExtendReport extend_global_graph(HierGraph& global, Vec2 robot_pos,
                                 std::span<const FrontierCenter> centers,
                                 const OccupancyGrid& belief, const GraphParams& params);

/// 8-connected A* over Free cells without corner cutting. Ties break on
/// (f, h, cell index). Returns the cell path, empty when unreachable.
std::vector<Cell> grid_astar(const OccupancyGrid& grid, Cell start, Cell goal);

struct MergeReport {
  std::size_t incoming_added = 0;
  std::size_t contracted = 0;
};

/// Ingests `incoming` into `mine`: vertices not already present (exact
/// position) are appended with their edges and attached by kNN line of
/// sight, then sparsified. Sparsification visits vertices newest first and
/// contracts a vertex into a partner within the merge radius (line of sight,
/// same component) when every former neighbour stays connected to the
/// partner. Vertices at `exempt` positions are never removed. Same-component
/// relations among surviving vertices are preserved.
MergeReport merge_global_graphs(HierGraph& mine, const HierGraph& incoming,
                                const OccupancyGrid& belief, const GraphParams& params,
                                std::span<const Vec2> exempt);

/// Sparsification pass on its own.
std::size_t sparsify_global_graph(HierGraph& graph, const OccupancyGrid& belief,
                                  const GraphParams& params, std::span<const Vec2> exempt);

/// Union of Dijkstra shortest paths from every robot vertex to every center
/// (snapped to its nearest vertex). Robot positions must be vertices.
HierGraph prune_global_graph(const HierGraph& graph, std::span<const Vec2> robot_positions,
                             std::span<const Vec2> centers);

/// Union of both layers for planning. Global vertices within half a lattice
/// spacing of a Local vertex collapse into it; the rest get utilities from
/// `frontiers`. Both layers' edges are kept and the Global vertices are
/// wired across layers by kNN line of sight.
HierGraph planning_graph(const HierGraph& global, const HierGraph& local,
                         const OccupancyGrid& belief, const GraphParams& params,
                         const FrontierIndex& frontiers);

}  // namespace mrx
