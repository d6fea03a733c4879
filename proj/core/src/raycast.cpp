#include "mrx/raycast.hpp"

namespace mrx {

std::vector<Cell> segment_cells(Cell from, Cell to) {
  std::vector<Cell> out;
  traverse_segment(from, to, [&](Cell c) {
    out.push_back(c);
    return true;
  });
  return out;
}

bool line_of_sight(const OccupancyGrid& grid, Cell a, Cell b) {
  return traverse_segment(a, b, [&](Cell c) {
    return grid.in_bounds(c) && grid.at(c) == CellState::Free;
  });
}

bool line_of_sight(const OccupancyGrid& grid, Vec2 a, Vec2 b) {
  return line_of_sight(grid, grid.world_to_cell(a), grid.world_to_cell(b));
}

int occupied_cells_on_segment(const OccupancyGrid& grid, Vec2 a, Vec2 b) {
  int walls = 0;
  traverse_segment(grid.world_to_cell(a), grid.world_to_cell(b), [&](Cell c) {
    if (grid.at_or_wall(c) == CellState::Occupied) ++walls;
    return true;
  });
  return walls;
}

}  // namespace mrx
