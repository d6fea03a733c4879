#pragma once

#include <cstdlib>
#include <vector>

#include "mrx/geometry.hpp"
#include "mrx/grid.hpp"

namespace mrx {

/// Visits, in order from `from` to `to`, every cell whose closed square is
/// touched by the segment joining the two cell centers. When the segment
/// passes exactly through a grid corner all four cells meeting there are
/// visited. Traversal is integer-exact. `visit(Cell)` returns false to stop
/// early; the function returns false iff it was stopped.
template <typename Visitor>
bool traverse_segment(Cell from, Cell to, Visitor&& visit) {
  const int dx = std::abs(to.x - from.x);
  const int dy = std::abs(to.y - from.y);
  const int sx = to.x > from.x ? 1 : -1;
  const int sy = to.y > from.y ? 1 : -1;
  Cell cur = from;
  if (!visit(cur)) return false;
  // The segment crosses the k-th vertical grid line at parameter
  // (2k-1)/(2dx) and the m-th horizontal line at (2m-1)/(2dy); compare the
  // cross-multiplied numerators to order crossings exactly.
  long long k = 1;
  long long m = 1;
  while (k <= dx || m <= dy) {
    const long long tx = k <= dx ? (2 * k - 1) * static_cast<long long>(dy) : -1;
    const long long ty = m <= dy ? (2 * m - 1) * static_cast<long long>(dx) : -1;
    if (ty < 0 || (tx >= 0 && tx < ty)) {
      cur.x += sx;
      ++k;
    } else if (tx < 0 || ty < tx) {
      cur.y += sy;
      ++m;
    } else {
      if (!visit(Cell{cur.x + sx, cur.y})) return false;
      if (!visit(Cell{cur.x, cur.y + sy})) return false;
      cur.x += sx;
      cur.y += sy;
      ++k;
      ++m;
    }
    if (!visit(cur)) return false;
  }
  return true;
}

/// Cells touched by the segment between two cell centers, in traversal order.
std::vector<Cell> segment_cells(Cell from, Cell to);

/// True iff every cell touched by the segment between the centers of the
/// cells containing `a` and `b` is Free. Unknown and out-of-bounds block.
bool line_of_sight(const OccupancyGrid& grid, Vec2 a, Vec2 b);
bool line_of_sight(const OccupancyGrid& grid, Cell a, Cell b);

/// Number of distinct Occupied cells touched by the segment a-b. Endpoint
/// positions are snapped to their cell centers; out-of-bounds cells count
/// as Occupied.
int occupied_cells_on_segment(const OccupancyGrid& grid, Vec2 a, Vec2 b);

}  // namespace mrx
