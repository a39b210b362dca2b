#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polyreconf/map_io.hpp"
#include "polyreconf/rrt_star.hpp"

namespace polyreconf::harness {

enum class PlannerId { glc, mwpm_expand, rrt_glc, rrt_mwpm };
enum class RunStatus { solved, stuck, not_found, infeasible };

std::string_view to_string(PlannerId id) noexcept;
std::string_view to_string(RunStatus status) noexcept;
std::optional<PlannerId> planner_from_string(std::string_view name) noexcept;
std::optional<RunStatus> status_from_string(std::string_view name) noexcept;

bool is_tree_planner(PlannerId id) noexcept;

/// Exit codes shared by the CLI.
inline constexpr int kExitSolved = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitStuck = 2;
inline constexpr int kExitNotFound = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitParseError = 5;

int exit_code_for(RunStatus status) noexcept;

struct RunRecord {
  std::string label;
  PlannerId planner = PlannerId::glc;
  PlannerParams params;
  bool initial_solution = false;
  RunStatus status = RunStatus::infeasible;
  std::string message;
  std::vector<Dropoff> sequence;
  std::int64_t carry_time = 0;
  std::int64_t empty_travel_time = 0;
  std::int64_t total_cost = 0;
  std::size_t nodes_created = 0;
  std::optional<std::size_t> nodes_to_first_solution;
  std::vector<CostCheckpoint> cost_curve;
  std::optional<std::int64_t> initial_solution_cost;
  std::optional<std::int64_t> tree_goal_cost;
  std::optional<std::int64_t> tree_goal_replay_cost;
  // Only serialized when set; left empty for byte-reproducible output.
  std::optional<double> wall_time;
};

struct RunOptions {
  PlannerParams params;
  bool initial_solution = false;
  bool timing = false;
};

/// Runs one planner on an instance. Precondition failures become an
/// infeasible record rather than an exception.
RunRecord run_planner(const MapInstance &instance, std::string label, PlannerId planner,
                      const RunOptions &options);

nlohmann::ordered_json to_json(const RunRecord &record);
RunRecord record_from_json(const nlohmann::json &j);

/// Single-line JSON.
std::string serialize_record(const RunRecord &record);
/// Throws ParseError.
RunRecord parse_record(std::string_view text);

RunRecord load_record_file(const std::string &path);

} // namespace polyreconf::harness
