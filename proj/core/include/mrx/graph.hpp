#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mrx/geometry.hpp"

namespace mrx {

enum class Layer : std::uint8_t { Global, Local };

using VertexId = std::uint64_t;

struct GraphVertex {
  VertexId id = 0;
  Vec2 pos;
  Layer layer = Layer::Global;
  /// Number of frontier cells observable from this vertex.
  int utility = 0;
  /// Global vertex that terminated a frontier-directed extension.
  bool anchor = false;
};

struct Edge {
  std::size_t to = 0;
  double length = 0.0;
};

struct EdgeRecord {
  std::size_t a = 0;
  std::size_t b = 0;
  double length = 0.0;
};

/// Undirected roadmap with Euclidean edge lengths. Vertices are addressed by
/// dense index (invalidated by removal) and carry a stable id that is unique
/// within the graph and increases with insertion order.
class HierGraph {
 public:
  std::size_t add_vertex(Vec2 pos, Layer layer, int utility = 0);
  /// Copies everything but the id, which is freshly assigned.
  std::size_t add_vertex_like(const GraphVertex& v);

  /// Adds an edge whose length is the Euclidean distance between endpoints.
  /// Returns false for self-loops and existing edges.
  bool add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  void remove_edge(std::size_t a, std::size_t b);

  /// Removes vertices and their incident edges; remaining vertices keep
  /// their ids and relative order.
  void remove_vertices(std::span<const std::size_t> indices);

  /// Keeps the marked vertices and only the listed edges between them.
  HierGraph subgraph(const std::vector<bool>& keep,
                     std::span<const EdgeRecord> edges) const;

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  std::size_t edge_count() const;

  const GraphVertex& vertex(std::size_t i) const { return vertices_[i]; }
  GraphVertex& vertex(std::size_t i) { return vertices_[i]; }
  const std::vector<GraphVertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& neighbors(std::size_t i) const { return adjacency_[i]; }

  /// Edges with a < b, ordered by (a, b).
  std::vector<EdgeRecord> edges() const;

  std::optional<std::size_t> find_at(Vec2 pos, double tolerance = 1e-9) const;
  /// Nearest vertex by Euclidean distance, ties to the lower index.
  std::optional<std::size_t> nearest(Vec2 pos) const;
  std::optional<std::size_t> index_of(VertexId id) const;

  std::vector<Vec2> positions() const;

  /// Label per vertex; labels are 0..count-1 in order of lowest index.
  std::vector<int> component_labels(int* count = nullptr) const;
  int component_count() const;

  VertexId next_id() const { return next_id_; }

 private:
  std::vector<GraphVertex> vertices_;
  std::vector<std::vector<Edge>> adjacency_;
  VertexId next_id_ = 0;
};

struct ShortestPaths {
  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

  std::vector<double> dist;
  std::vector<std::size_t> parent;

  bool reachable(std::size_t v) const { return dist[v] != kUnreachable; }
  /// Vertex sequence source..target; empty when unreachable.
  std::vector<std::size_t> path_to(std::size_t target) const;
};

/// Single-source Dijkstra. Ties between equal tentative distances resolve
/// to the lower vertex index.
ShortestPaths dijkstra(const HierGraph& graph, std::size_t source);

}  // namespace mrx
