#include "polyreconf/map_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace polyreconf {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

int parse_dimension(std::string_view line, std::size_t &pos, int line_no) {
  while (pos < line.size() && line[pos] == ' ')
    ++pos;
  int value = 0;
  auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
  if (ec != std::errc() || value <= 0)
    throw ParseError(line_no, static_cast<int>(pos) + 1, "expected a positive integer");
  pos = static_cast<std::size_t>(ptr - line.data());
  return value;
}

} // namespace

MapInstance parse_map(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty())
    throw ParseError(1, 1, "empty map file");

  std::size_t pos = 0;
  const int width = parse_dimension(lines[0], pos, 1);
  const int height = parse_dimension(lines[0], pos, 1);
  if (pos != lines[0].size())
    throw ParseError(1, static_cast<int>(pos) + 1, "trailing characters after dimensions");

  if (lines.size() < static_cast<std::size_t>(height) + 1)
    throw ParseError(static_cast<int>(lines.size()) + 1, 1,
                     "expected " + std::to_string(height) + " grid rows");
  for (std::size_t extra = static_cast<std::size_t>(height) + 1; extra < lines.size(); ++extra)
    if (!lines[extra].empty())
      throw ParseError(static_cast<int>(extra) + 1, 1, "unexpected content after grid");

  GridMap map(width, height);
  std::vector<Cell> start, goal;
  for (int y = 0; y < height; ++y) {
    const std::string_view row = lines[static_cast<std::size_t>(y) + 1];
    const int line_no = y + 2;
    if (row.size() != static_cast<std::size_t>(width))
      throw ParseError(line_no, static_cast<int>(std::min(row.size(), static_cast<std::size_t>(width))) + 1,
                       "row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(width));
    for (int x = 0; x < width; ++x) {
      const Cell c{x, y};
      switch (row[static_cast<std::size_t>(x)]) {
      case '.': break;
      case '#': map.set_obstacle(c); break;
      case 'S': start.push_back(c); break;
      case 'G': goal.push_back(c); break;
      case 'B':
        start.push_back(c);
        goal.push_back(c);
        break;
      default:
        throw ParseError(line_no, x + 1,
                         std::string("unknown cell character '") + row[static_cast<std::size_t>(x)] + "'");
      }
    }
  }
  return {std::move(map), Configuration(std::move(start)), Configuration(std::move(goal))};
}

std::string serialize_map(const MapInstance &instance) {
  const GridMap &map = instance.map;
  std::string out = std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const Cell c{x, y};
      const bool s = instance.start.contains(c);
      const bool g = instance.goal.contains(c);
      char ch = '.';
      if (map.is_obstacle(c))
        ch = '#';
      else if (s && g)
        ch = 'B';
      else if (s)
        ch = 'S';
      else if (g)
        ch = 'G';
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

MapInstance load_map_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(0, 0, "cannot open map file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_map(buffer.str());
}

void save_map_file(const std::string &path, const MapInstance &instance) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw PlanningError(Errc::invalid_params, "cannot write map file '" + path + "'");
  out << serialize_map(instance);
}

} // namespace polyreconf
