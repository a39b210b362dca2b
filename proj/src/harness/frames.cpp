#include "polyreconf/harness/frames.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

namespace polyreconf::harness {

namespace {

constexpr int kCellPx = 16;

std::string text_frame(const MapInstance &instance, const Configuration &tiles,
                       std::optional<Dropoff> last, std::size_t index, std::size_t total,
                       std::size_t goal_overlap) {
  const GridMap &map = instance.map;
  std::string out = "frame " + std::to_string(index) + "/" + std::to_string(total) + "\n";
  out += "overlap " + std::to_string(goal_overlap) + "/" + std::to_string(instance.goal.size()) + "\n";
  if (last)
    out += "move (" + std::to_string(last->source.x) + "," + std::to_string(last->source.y) + ")->(" +
           std::to_string(last->target.x) + "," + std::to_string(last->target.y) + ") d_p " +
           std::to_string(last->pickup_distance) + " d_d " + std::to_string(last->dropoff_distance) + "\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const Cell c{x, y};
      char ch = '.';
      if (map.is_obstacle(c))
        ch = '#';
      else if (last && c == last->target)
        ch = 'D';
      else if (last && c == last->source)
        ch = 'P';
      else if (tiles.contains(c))
        ch = instance.goal.contains(c) ? '*' : 'o';
      else if (instance.goal.contains(c))
        ch = 'g';
      else if (instance.start.contains(c))
        ch = 's';
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

std::string svg_frame(const MapInstance &instance, const Configuration &tiles,
                      std::optional<Dropoff> last, std::size_t index) {
  const GridMap &map = instance.map;
  const int w = map.width() * kCellPx;
  const int h = map.height() * kCellPx;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                    "\" height=\"" + std::to_string(h) + "\">\n";
  out += "<title>frame " + std::to_string(index) + "</title>\n";
  out += "<rect width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
         "\" fill=\"white\"/>\n";
  auto rect = [&](Cell c, const char *fill, const char *extra = "") {
    char buffer[160];
    std::snprintf(buffer, sizeof buffer,
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\"%s/>\n",
                  c.x * kCellPx, c.y * kCellPx, kCellPx, kCellPx, fill, extra);
    out += buffer;
  };
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x) {
      const Cell c{x, y};
      if (map.is_obstacle(c))
        rect(c, "black");
      else if (instance.goal.contains(c))
        rect(c, "#b8f0b8");
      else if (instance.start.contains(c))
        rect(c, "#b8dcf5");
    }
  for (Cell c : tiles)
    rect(c, "#d62728", " fill-opacity=\"0.85\"");
  if (last) {
    rect(last->target, "#1f4fd6");
    rect(last->source, "none", " stroke=\"#1f4fd6\" stroke-width=\"2\"");
  }
  out += "</svg>\n";
  return out;
}

} // namespace

std::vector<Frame> render_frames(const MapInstance &instance, const RunRecord &record,
                                 FrameFormat format) {
  const auto steps = replay(instance.start, record.sequence, instance.map);
  const std::size_t total = steps.size();
  std::vector<Frame> frames;
  auto emit = [&](const Configuration &tiles, std::optional<Dropoff> last) {
    Frame frame;
    frame.index = frames.size();
    frame.goal_overlap = overlap(tiles, instance.goal);
    frame.body = format == FrameFormat::text
                     ? text_frame(instance, tiles, last, frame.index, total, frame.goal_overlap)
                     : svg_frame(instance, tiles, last, frame.index);
    frames.push_back(std::move(frame));
  };
  emit(instance.start, std::nullopt);
  for (const auto &step : steps)
    emit(step.after, step.dropoff);
  return frames;
}

std::size_t write_frames(const std::string &directory, const std::vector<Frame> &frames,
                         FrameFormat format) {
  std::filesystem::create_directories(directory);
  for (const Frame &frame : frames) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.%s", frame.index,
                  format == FrameFormat::text ? "txt" : "svg");
    std::ofstream out(std::filesystem::path(directory) / name, std::ios::binary);
    out << frame.body;
  }
  return frames.size();
}

} // namespace polyreconf::harness
