#pragma once

// Text map format:
//
//   <width> <height>
//   <height rows of width characters>
//
// '.' free, '#' obstacle, 'S' start tile, 'G' goal tile, 'B' tile in both.
// Row 0 is the first grid line; x grows rightward and y downward.

#include <iosfwd>
#include <string>
#include <string_view>

#include "polyreconf/grid.hpp"

namespace polyreconf {

struct MapInstance {
  GridMap map;
  Configuration start;
  Configuration goal;
};

/// Parses the text format. Throws ParseError with the offending position.
/// Start and goal are returned as read; they are not validated here.
MapInstance parse_map(std::string_view text);

std::string serialize_map(const MapInstance &instance);

MapInstance load_map_file(const std::string &path);
void save_map_file(const std::string &path, const MapInstance &instance);

} // namespace polyreconf
