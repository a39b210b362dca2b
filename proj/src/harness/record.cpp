#include "polyreconf/harness/record.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace polyreconf::harness {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(PlannerId id) noexcept {
  switch (id) {
  case PlannerId::glc: return "glc";
  case PlannerId::mwpm_expand: return "mwpm-expand";
  case PlannerId::rrt_glc: return "rrt-glc";
  case PlannerId::rrt_mwpm: return "rrt-mwpm";
  }
  return "unknown";
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
  case RunStatus::solved: return "solved";
  case RunStatus::stuck: return "stuck";
  case RunStatus::not_found: return "not-found";
  case RunStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

std::optional<PlannerId> planner_from_string(std::string_view name) noexcept {
  for (PlannerId id : {PlannerId::glc, PlannerId::mwpm_expand, PlannerId::rrt_glc, PlannerId::rrt_mwpm})
    if (to_string(id) == name)
      return id;
  return std::nullopt;
}

std::optional<RunStatus> status_from_string(std::string_view name) noexcept {
  for (RunStatus s : {RunStatus::solved, RunStatus::stuck, RunStatus::not_found, RunStatus::infeasible})
    if (to_string(s) == name)
      return s;
  return std::nullopt;
}

bool is_tree_planner(PlannerId id) noexcept {
  return id == PlannerId::rrt_glc || id == PlannerId::rrt_mwpm;
}

int exit_code_for(RunStatus status) noexcept {
  switch (status) {
  case RunStatus::solved: return kExitSolved;
  case RunStatus::stuck: return kExitStuck;
  case RunStatus::not_found: return kExitNotFound;
  case RunStatus::infeasible: return kExitInfeasible;
  }
  return kExitFailure;
}

namespace {

void fill_costs(RunRecord &record, const std::vector<PlanStep> &steps) {
  record.sequence.clear();
  for (const auto &step : steps)
    record.sequence.push_back(step.dropoff);
  const auto costs = sequence_costs(steps);
  record.carry_time = costs.carry_time;
  record.empty_travel_time = costs.empty_travel_time;
  record.total_cost = costs.total;
}

// Best solution of the two greedy planners, used to seed the tree.
std::vector<PlanStep> best_greedy_solution(const MapInstance &instance) {
  auto glc = glc_solve(instance.start, instance.goal, instance.map);
  auto mwpm = mwpm_expand_solve(instance.start, instance.goal, instance.map);
  if (mwpm.status == SolveStatus::solved &&
      sequence_costs(mwpm.steps).total < sequence_costs(glc).total)
    return std::move(mwpm.steps);
  return glc;
}

} // namespace

RunRecord run_planner(const MapInstance &instance, std::string label, PlannerId planner,
                      const RunOptions &options) {
  RunRecord record;
  record.label = std::move(label);
  record.planner = planner;
  record.params = options.params;
  record.initial_solution = options.initial_solution && is_tree_planner(planner);
  const auto started = std::chrono::steady_clock::now();

  try {
    switch (planner) {
    case PlannerId::glc: {
      fill_costs(record, glc_solve(instance.start, instance.goal, instance.map));
      record.status = RunStatus::solved;
      break;
    }
    case PlannerId::mwpm_expand: {
      auto result = mwpm_expand_solve(instance.start, instance.goal, instance.map);
      fill_costs(record, result.steps);
      record.status = result.status == SolveStatus::solved ? RunStatus::solved : RunStatus::stuck;
      if (result.status == SolveStatus::budget_exceeded)
        record.message = "step budget exhausted";
      break;
    }
    case PlannerId::rrt_glc:
    case PlannerId::rrt_mwpm: {
      const LocalPlanner local =
          planner == PlannerId::rrt_glc ? LocalPlanner::glc : LocalPlanner::mwpm_expand;
      std::vector<PlanStep> seed;
      if (record.initial_solution && instance.start != instance.goal)
        seed = best_greedy_solution(instance);
      auto result = plan(instance.start, instance.goal, instance.map, options.params, local, seed);
      record.status = result.status == PlanStatus::found ? RunStatus::solved : RunStatus::not_found;
      if (result.status == PlanStatus::found)
        fill_costs(record, result.steps);
      if (result.time_limit_hit)
        record.message = "time limit reached";
      record.nodes_created = result.nodes_created;
      record.nodes_to_first_solution = result.nodes_to_first_solution;
      record.cost_curve = std::move(result.curve);
      record.initial_solution_cost = result.initial_solution_cost;
      record.tree_goal_cost = result.tree_goal_cost;
      record.tree_goal_replay_cost = result.tree_goal_replay_cost;
      break;
    }
    }
  } catch (const PlanningError &e) {
    switch (e.code()) {
    case Errc::separate_components:
    case Errc::size_mismatch:
    case Errc::invalid_configuration:
    case Errc::infeasible:
    {
      RunRecord failed;
      failed.label = record.label;
      failed.planner = planner;
      failed.params = options.params;
      failed.initial_solution = record.initial_solution;
      failed.status = RunStatus::infeasible;
      failed.message = e.what();
      record = std::move(failed);
    }
      break;
    default:
      throw;
    }
  }
  if (options.timing)
    record.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

// --- JSON ------------------------------------------------------------------

namespace {

template <typename T> ordered_json optional_json(const std::optional<T> &value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

template <typename T> std::optional<T> optional_from(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return j.at(key).get<T>();
}

} // namespace

ordered_json to_json(const RunRecord &record) {
  ordered_json params = {
      {"bias_base", record.params.bias_base},
      {"bias_max", record.params.bias_max},
      {"rad", record.params.rad},
      {"max_nodes", record.params.max_nodes},
      {"cost_threshold", optional_json(record.params.cost_threshold)},
      {"checkpoint_interval", record.params.checkpoint_interval},
      {"time_limit", optional_json(record.params.time_limit_seconds)},
      {"initial_solution", record.initial_solution},
  };
  ordered_json sequence = ordered_json::array();
  for (const Dropoff &d : record.sequence)
    sequence.push_back({{"source", {d.source.x, d.source.y}},
                        {"target", {d.target.x, d.target.y}},
                        {"d_p", d.pickup_distance},
                        {"d_d", d.dropoff_distance}});
  ordered_json curve = ordered_json::array();
  for (const auto &point : record.cost_curve)
    curve.push_back({point.nodes, optional_json(point.best_cost)});

  ordered_json j = {
      {"label", record.label},
      {"planner", to_string(record.planner)},
      {"params", params},
      {"seed", record.params.seed},
      {"status", to_string(record.status)},
  };
  if (!record.message.empty())
    j["message"] = record.message;
  j["sequence"] = sequence;
  j["carry_time"] = record.carry_time;
  j["empty_travel_time"] = record.empty_travel_time;
  j["total_cost"] = record.total_cost;
  j["nodes_created"] = record.nodes_created;
  j["nodes_to_first_solution"] = optional_json(record.nodes_to_first_solution);
  j["cost_curve"] = curve;
  j["initial_solution_cost"] = optional_json(record.initial_solution_cost);
  j["tree_goal_cost"] = optional_json(record.tree_goal_cost);
  j["tree_goal_replay_cost"] = optional_json(record.tree_goal_replay_cost);
  if (record.wall_time)
    j["wall_time"] = *record.wall_time;
  return j;
}

RunRecord record_from_json(const json &j) {
  RunRecord record;
  record.label = j.value("label", "");
  const auto planner = planner_from_string(j.at("planner").get<std::string>());
  if (!planner)
    throw ParseError(1, 1, "unknown planner in record");
  record.planner = *planner;
  const auto status = status_from_string(j.at("status").get<std::string>());
  if (!status)
    throw ParseError(1, 1, "unknown status in record");
  record.status = *status;
  record.message = j.value("message", "");
  record.params.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("params")) {
    const json &p = j.at("params");
    record.params.bias_base = p.value("bias_base", record.params.bias_base);
    record.params.bias_max = p.value("bias_max", record.params.bias_max);
    record.params.rad = p.value("rad", record.params.rad);
    record.params.max_nodes = p.value("max_nodes", record.params.max_nodes);
    record.params.cost_threshold = optional_from<std::int64_t>(p, "cost_threshold");
    record.params.checkpoint_interval = p.value("checkpoint_interval", record.params.checkpoint_interval);
    record.params.time_limit_seconds = optional_from<double>(p, "time_limit");
    record.initial_solution = p.value("initial_solution", false);
  }
  for (const json &d : j.at("sequence")) {
    const auto &s = d.at("source");
    const auto &t = d.at("target");
    record.sequence.push_back({{s.at(0).get<int>(), s.at(1).get<int>()},
                               {t.at(0).get<int>(), t.at(1).get<int>()},
                               d.at("d_p").get<int>(),
                               d.at("d_d").get<int>()});
  }
  record.carry_time = j.value("carry_time", std::int64_t{0});
  record.empty_travel_time = j.value("empty_travel_time", std::int64_t{0});
  record.total_cost = j.value("total_cost", std::int64_t{0});
  record.nodes_created = j.value("nodes_created", std::size_t{0});
  record.nodes_to_first_solution = optional_from<std::size_t>(j, "nodes_to_first_solution");
  if (j.contains("cost_curve"))
    for (const json &point : j.at("cost_curve"))
      record.cost_curve.push_back(
          {point.at(0).get<std::size_t>(),
           point.at(1).is_null() ? std::nullopt
                                 : std::optional<std::int64_t>(point.at(1).get<std::int64_t>())});
  record.initial_solution_cost = optional_from<std::int64_t>(j, "initial_solution_cost");
  record.tree_goal_cost = optional_from<std::int64_t>(j, "tree_goal_cost");
  record.tree_goal_replay_cost = optional_from<std::int64_t>(j, "tree_goal_replay_cost");
  record.wall_time = optional_from<double>(j, "wall_time");
  return record;
}

std::string serialize_record(const RunRecord &record) { return to_json(record).dump(); }

RunRecord parse_record(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    // byte offsets are 1-based; records are single-line, so column = byte.
    throw ParseError(1, static_cast<int>(e.byte), e.what());
  }
  try {
    return record_from_json(j);
  } catch (const json::exception &e) {
    throw ParseError(1, 1, e.what());
  }
}

RunRecord load_record_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(0, 0, "cannot open record file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_record(buffer.str());
}

} // namespace polyreconf::harness
