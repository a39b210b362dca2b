#pragma once

// Benchmark sweeps. A spec is a flat `key = value` text file; '#' starts a
// comment and list values are comma separated:
//
//   maps                     = data/maps/map1.txt, data/maps/map2.txt
//   random.width             = 30
//   random.height            = 30
//   random.tiles             = 15
//   random.densities         = 0.1, 0.3, 0.5
//   random.maps_per_density  = 10
//   planners                 = rrt-glc, rrt-mwpm, glc, mwpm-expand
//   bias_base                = 0.1
//   bias_max                 = 0.75
//   rad                      = 1
//   seeds                    = 10
//   max_nodes                = 10000
//   checkpoint               = 500
//   time_limit               = 60        (seconds per cell, 0 disables)
//   initial_solution         = false
//   master_seed              = 1
//   threads                  = 0         (0 = hardware concurrency)

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polyreconf/harness/record.hpp"

namespace polyreconf::harness {

struct RandomFamily {
  int width = 30;
  int height = 30;
  std::size_t tiles = 15;
  std::vector<double> densities;
  std::size_t maps_per_density = 10;
};

struct SweepSpec {
  std::vector<std::string> map_files;
  RandomFamily random;
  std::vector<PlannerId> planners;
  double bias_base = 0.1;
  std::vector<double> bias_max{0.75};
  std::vector<std::size_t> rad{1};
  std::size_t seeds = 10;
  std::size_t max_nodes = 10000;
  std::size_t checkpoint = 500;
  double time_limit = 60.0;
  bool initial_solution = false;
  std::uint64_t master_seed = 1;
  std::size_t threads = 0;

  /// Throws invalid_params (empty planner matrix, no maps, zero budgets).
  void validate() const;
};

/// Throws ParseError on unknown keys or malformed values.
SweepSpec parse_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec(const std::string &path);

std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// Seed of one run, independent of scheduling.
std::uint64_t cell_seed(std::uint64_t master, std::size_t map_index, std::size_t seed_index) noexcept;

struct SweepMap {
  std::string label;
  std::string group; // density such as "0.30", or "files"
  MapInstance instance;
};

struct SweepCell {
  std::size_t map_index = 0;
  PlannerId planner = PlannerId::glc;
  std::size_t bias_index = 0;
  std::size_t rad_index = 0;
  std::size_t seed_index = 0;
  RunRecord record;
};

struct SweepResult {
  std::vector<SweepMap> maps;
  std::vector<SweepCell> cells; // sorted by cell key
};

/// Builds the map list: files first, then the random family by density.
std::vector<SweepMap> sweep_maps(const SweepSpec &spec);

/// Runs every cell on a worker pool. Greedy planners run once per map since
/// they ignore the seed and the tree parameters. Failing cells are recorded
/// and the sweep continues.
SweepResult run_sweep(const SweepSpec &spec);

std::string records_jsonl(const SweepResult &result);
/// One row per (map, planner, bias_max, rad) with success and means.
std::string summary_csv(const SweepSpec &spec, const SweepResult &result);
/// Per-density comparison table. Without initial solutions: share of maps on
/// which each planner returned the cheapest solution plus the greedy
/// matching planner's success rate. With them: which greedy planner gave the
/// better seed and how often the tree improved on it per rad.
std::string table_csv(const SweepSpec &spec, const SweepResult &result);
/// Mean best cost against node count per (map, planner, bias_max, rad).
std::string curves_csv(const SweepSpec &spec, const SweepResult &result);

/// Writes records.jsonl, summary.csv, table.csv and curves.csv.
void write_sweep(const std::string &directory, const SweepSpec &spec, const SweepResult &result);

} // namespace polyreconf::harness
