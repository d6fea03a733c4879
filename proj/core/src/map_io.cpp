#include "mrx/map_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace mrx {
namespace {

char to_char(CellState s) {
  switch (s) {
    case CellState::Free: return '.';
    case CellState::Occupied: return '#';
    case CellState::Unknown: return '?';
  }
  return '?';
}

}  // namespace

void write_map(std::ostream& os, const OccupancyGrid& grid) {
  std::ostringstream res;
  res << std::setprecision(std::numeric_limits<double>::max_digits10) << grid.resolution();
  os << grid.width() << ' ' << grid.height() << ' ' << res.str() << '\n';
  std::string row(static_cast<std::size_t>(grid.width()), '?');
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) row[x] = to_char(grid.at({x, y}));
    os << row << '\n';
  }
}

OccupancyGrid read_map(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw MapFormatError("map: missing header");
  std::istringstream hs(header);
  int w = 0;
  int h = 0;
  double res = 0.0;
  if (!(hs >> w >> h >> res) || w <= 0 || h <= 0 || !(res > 0.0)) {
    throw MapFormatError("map: malformed header '" + header + "'");
  }
  OccupancyGrid grid(w, h, res);
  std::string row;
  for (int y = 0; y < h; ++y) {
    if (!std::getline(is, row)) {
      throw MapFormatError("map: expected " + std::to_string(h) + " rows, got " +
                           std::to_string(y));
    }
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (static_cast<int>(row.size()) != w) {
      throw MapFormatError("map: row " + std::to_string(y) + " has " +
                           std::to_string(row.size()) + " cells, expected " +
                           std::to_string(w));
    }
    for (int x = 0; x < w; ++x) {
      switch (row[x]) {
        case '.': grid.set({x, y}, CellState::Free); break;
        case '#': grid.set({x, y}, CellState::Occupied); break;
        case '?': grid.set({x, y}, CellState::Unknown); break;
        default:
          throw MapFormatError(std::string("map: invalid cell character '") + row[x] + "'");
      }
    }
  }
  return grid;
}

void save_map(const std::string& path, const OccupancyGrid& grid) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw MapFormatError("map: cannot open " + path + " for writing");
  write_map(os, grid);
}

OccupancyGrid load_map(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MapFormatError("map: cannot open " + path);
  return read_map(is);
}

}  // namespace mrx
