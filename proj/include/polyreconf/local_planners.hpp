#pragma once

// Single-dropoff planners (Grow Largest Component and MWPM expansion), move
// application, and the travel-time accounting shared with the tree planner.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polyreconf/grid.hpp"

namespace polyreconf {

/// One atomic move: pick up the tile at `source` and place it at `target`.
/// `pickup_distance` is walked empty-handed on the structure from the robot
/// position to `source`; `dropoff_distance` is walked carrying the tile over
/// the structure plus the placement cell.
struct Dropoff {
  Cell source;
  Cell target;
  int pickup_distance = 0;
  int dropoff_distance = 0;

  int cost() const noexcept { return pickup_distance + dropoff_distance; }

  friend bool operator==(const Dropoff &, const Dropoff &) = default;
};

/// Robot position marker. An unset position means the next pickup is free
/// (the robot is assumed to start next to the first tile it moves).
struct RobotState {
  std::optional<Cell> position;

  friend bool operator==(const RobotState &, const RobotState &) = default;
};

struct PlanStep {
  Configuration before;
  Dropoff dropoff;
  Configuration after;
};

struct AppliedDropoff {
  Configuration after;
  RobotState robot;
  Dropoff dropoff; // with recomputed distances
};

/// True when moving `source` to `target` keeps `config` a polyomino: source is
/// a leaf (pass the precomputed leaf set), target is a free unoccupied cell
/// touching the remaining tiles. A single tile may move to a neighbor cell.
bool is_valid_dropoff(const GridMap &map, const Configuration &config,
                      std::span<const Cell> leaves, Cell source, Cell target);

/// Carry distance from source to target over config ∪ {target}.
int carry_distance(const Configuration &config, Cell source, Cell target);

/// Applies a move and recomputes both distances. Throws illegal_pickup,
/// illegal_placement or disconnected_result.
AppliedDropoff apply_dropoff(const Configuration &config, const RobotState &robot,
                             const Dropoff &move, const GridMap &map);

enum class StepStatus { moved, already_at_goal, stuck };

/// Result of one local-planner query. `dropoff` is meaningful only when
/// status == moved; its carry distance is filled, its pickup distance is 0
/// until apply_dropoff sees the robot.
struct StepOutcome {
  StepStatus status = StepStatus::moved;
  Dropoff dropoff{};
};

StepOutcome glc_step(const Configuration &s, const Configuration &g, const GridMap &map);
/// Moves the leaf with the longest matched distance to the free neighbor
/// cell nearest its goal. Placements that shorten the distance are tried
/// before any other valid placement, each first under the matching that
/// keeps tiles on their goal cells and then under the plain one.
StepOutcome mwpm_expand_step(const Configuration &s, const Configuration &g,
                             const GridMap &map);

enum class LocalPlanner { glc, mwpm_expand };

std::string_view to_string(LocalPlanner planner) noexcept;
std::optional<LocalPlanner> local_planner_from_string(std::string_view name) noexcept;

StepOutcome local_step(LocalPlanner planner, const Configuration &s, const Configuration &g,
                       const GridMap &map);

/// 4 * n * (width + height).
std::size_t default_step_budget(std::size_t tiles, const GridMap &map);

/// Runs GLC until the goal is reached. Throws separate_components,
/// size_mismatch, or budget_exceeded (the latter indicates a bug).
std::vector<PlanStep> glc_solve(const Configuration &s, const Configuration &g,
                                const GridMap &map,
                                std::optional<std::size_t> step_budget = std::nullopt,
                                RobotState robot = {});

enum class SolveStatus { solved, stuck, budget_exceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::solved;
  std::vector<PlanStep> steps;
};

/// Iterates MWPM expansion, skipping placements that would recreate a
/// configuration already passed through. Getting stuck, including having
/// no placement left but a revisit, is an ordinary outcome.
SolveResult mwpm_expand_solve(const Configuration &s, const Configuration &g,
                              const GridMap &map,
                              std::optional<std::size_t> step_budget = std::nullopt,
                              RobotState robot = {});

struct SequenceCosts {
  std::int64_t carry_time = 0;
  std::int64_t empty_travel_time = 0;
  std::int64_t total = 0;
};

/// Throws broken_chain when consecutive steps do not link up.
SequenceCosts sequence_costs(std::span<const PlanStep> steps);

/// Replays bare moves from `start`, recomputing distances.
std::vector<PlanStep> replay(const Configuration &start, std::span<const Dropoff> moves,
                             const GridMap &map, RobotState robot = {});

} // namespace polyreconf
