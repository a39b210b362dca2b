#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyreconf/harness/commands.hpp"

using namespace polyreconf;
using namespace polyreconf::harness;

namespace {

const std::vector<std::string> kPlannerNames{"glc", "mwpm-expand", "rrt-glc", "rrt-mwpm"};
const std::vector<std::string> kFormatNames{"text", "svg"};

FrameFormat format_of(const std::string &name) {
  return name == "svg" ? FrameFormat::svg : FrameFormat::text;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Polyomino reconfiguration planners and benchmark harness"};
  app.require_subcommand(1);

  SolveOptions solve;
  double time_limit = 0;
  std::int64_t cost_threshold = -1;
  auto *solve_cmd = app.add_subcommand("solve", "Plan one map and print a JSON record");
  solve_cmd->add_option("map", solve.map_path, "Map file")->required()->check(CLI::ExistingFile);
  std::string planner = "glc";
  solve_cmd->add_option("-p,--planner", planner, "glc | mwpm-expand | rrt-glc | rrt-mwpm")
      ->check(CLI::IsMember(kPlannerNames));
  solve_cmd->add_option("--seed", solve.run.params.seed, "Tree planner seed");
  solve_cmd->add_option("--bias-base", solve.run.params.bias_base);
  solve_cmd->add_option("--bias-max", solve.run.params.bias_max);
  solve_cmd->add_option("--rad", solve.run.params.rad, "Dropoffs per tree edge");
  solve_cmd->add_option("--max-nodes", solve.run.params.max_nodes);
  solve_cmd->add_option("--checkpoint", solve.run.params.checkpoint_interval);
  solve_cmd->add_option("--time-limit", time_limit, "Seconds, 0 for none");
  solve_cmd->add_option("--cost-threshold", cost_threshold, "Stop once a solution this cheap exists");
  solve_cmd->add_flag("--initial-solution", solve.run.initial_solution,
                      "Seed the tree with the better greedy solution");
  solve_cmd->add_flag("--timing", solve.run.timing, "Include wall_time in the record");
  solve_cmd->add_option("-o,--out", solve.out_path, "Record file (default stdout)");
  solve_cmd->add_option("--frames", solve.frames_dir, "Also write frames to this directory");
  std::string solve_format = "text";
  solve_cmd->add_option("--frame-format", solve_format)->check(CLI::IsMember(kFormatNames));

  ValidateOptions validate;
  auto *validate_cmd = app.add_subcommand("validate", "Independently replay a record");
  validate_cmd->add_option("map", validate.map_path)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("record", validate.record_path)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("-o,--out", validate.out_path, "Report file (default stdout)");
  std::uint64_t unused_seed = 0;
  validate_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; unused");

  SweepOptions sweep;
  std::uint64_t sweep_seed = 0;
  std::size_t sweep_threads = 0;
  auto *sweep_cmd = app.add_subcommand("sweep", "Run a benchmark sweep from a spec file");
  sweep_cmd->add_option("spec", sweep.spec_path)->required()->check(CLI::ExistingFile);
  auto *sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Override master_seed");
  auto *threads_opt = sweep_cmd->add_option("--threads", sweep_threads);
  sweep_cmd->add_option("-o,--out", sweep.out_dir, "Output directory");

  FramesOptions frames;
  auto *frames_cmd = app.add_subcommand("frames", "Render one frame per dropoff");
  frames_cmd->add_option("map", frames.map_path)->required()->check(CLI::ExistingFile);
  frames_cmd->add_option("record", frames.record_path)->required()->check(CLI::ExistingFile);
  frames_cmd->add_option("-o,--out", frames.out_dir, "Output directory");
  std::string frames_format = "text";
  frames_cmd->add_option("-f,--format", frames_format)->check(CLI::IsMember(kFormatNames));
  frames_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; unused");

  GenOptions gen;
  auto *gen_cmd = app.add_subcommand("gen", "Generate a fixture or random map");
  gen_cmd->add_option("kind", gen.kind, "random | detour | c-shape | cc-shape")
      ->check(CLI::IsMember({"random", "detour", "c-shape", "cc-shape"}));
  gen_cmd->add_option("-n,--tiles", gen.n);
  gen_cmd->add_option("-k,--wall", gen.k, "Detour wall length");
  gen_cmd->add_option("--width", gen.width);
  gen_cmd->add_option("--height", gen.height);
  gen_cmd->add_option("--density", gen.density);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("-o,--out", gen.out_path, "Map file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kExitFailure;
  }

  if (*solve_cmd) {
    solve.planner = *planner_from_string(planner);
    solve.frame_format = format_of(solve_format);
    if (time_limit > 0)
      solve.run.params.time_limit_seconds = time_limit;
    if (cost_threshold >= 0)
      solve.run.params.cost_threshold = cost_threshold;
    return cmd_solve(solve, std::cout, std::cerr);
  }
  if (*validate_cmd)
    return cmd_validate(validate, std::cout, std::cerr);
  if (*sweep_cmd) {
    if (*sweep_seed_opt)
      sweep.seed = sweep_seed;
    if (*threads_opt)
      sweep.threads = sweep_threads;
    return cmd_sweep(sweep, std::cout, std::cerr);
  }
  if (*frames_cmd) {
    frames.format = format_of(frames_format);
    return cmd_frames(frames, std::cout, std::cerr);
  }
  return cmd_gen(gen, std::cout, std::cerr);
}
