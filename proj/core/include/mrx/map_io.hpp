#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mrx/grid.hpp"

namespace mrx {

class MapFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ASCII map format: a header line `W H RES`, then H rows of W characters
/// (`#` Occupied, `.` Free, `?` Unknown). Row y = 0 comes first.
void write_map(std::ostream& os, const OccupancyGrid& grid);
OccupancyGrid read_map(std::istream& is);

void save_map(const std::string& path, const OccupancyGrid& grid);
OccupancyGrid load_map(const std::string& path);

}  // namespace mrx
