#pragma once

// Subcommand bodies shared by the CLI and the tests. Each returns the
// process exit code and writes results to `out` unless a path is given.

#include <iosfwd>
#include <optional>
#include <string>

#include "polyreconf/harness/frames.hpp"
#include "polyreconf/harness/record.hpp"

namespace polyreconf::harness {

struct SolveOptions {
  std::string map_path;
  PlannerId planner = PlannerId::glc;
  RunOptions run;
  std::string out_path;    // empty: write to `out`
  std::string frames_dir;  // empty: no frames
  FrameFormat frame_format = FrameFormat::text;
};

struct ValidateOptions {
  std::string map_path;
  std::string record_path;
  std::string out_path;
};

struct SweepOptions {
  std::string spec_path;
  std::string out_dir = "sweep_out";
  std::optional<std::uint64_t> seed;   // overrides master_seed
  std::optional<std::size_t> threads;
};

struct FramesOptions {
  std::string map_path;
  std::string record_path;
  std::string out_dir = "frames";
  FrameFormat format = FrameFormat::text;
};

struct GenOptions {
  std::string kind = "random"; // random | detour | c-shape | cc-shape
  int n = 15;
  int k = 3;
  int width = 30;
  int height = 30;
  double density = 0.3;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_solve(const SolveOptions &options, std::ostream &out, std::ostream &err);
/// 0 when every step and the totals check out, 1 otherwise.
int cmd_validate(const ValidateOptions &options, std::ostream &out, std::ostream &err);
int cmd_sweep(const SweepOptions &options, std::ostream &out, std::ostream &err);
int cmd_frames(const FramesOptions &options, std::ostream &out, std::ostream &err);
int cmd_gen(const GenOptions &options, std::ostream &out, std::ostream &err);

} // namespace polyreconf::harness
