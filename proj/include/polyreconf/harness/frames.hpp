#pragma once

#include <string>
#include <vector>

#include "polyreconf/harness/record.hpp"

namespace polyreconf::harness {

enum class FrameFormat { text, svg };

struct Frame {
  std::size_t index = 0;
  std::size_t goal_overlap = 0; // tiles currently on goal cells
  std::string body;
};

/// One frame for the initial configuration plus one per dropoff. Text legend:
///   '#' obstacle   'o' tile   '*' tile on a goal cell   's' empty start cell
///   'g' empty goal cell   'P' cell just vacated   'D' cell just filled
/// SVG frames use black obstacles, red tiles, light blue start and light
/// green goal shading, a blue placement cell and an outlined pickup cell.
/// Throws PlanningError when the sequence does not replay.
std::vector<Frame> render_frames(const MapInstance &instance, const RunRecord &record,
                                 FrameFormat format);

/// Writes frame_0000.txt (or .svg) ... into `directory`, creating it.
std::size_t write_frames(const std::string &directory, const std::vector<Frame> &frames,
                         FrameFormat format);

} // namespace polyreconf::harness
