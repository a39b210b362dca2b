#pragma once

// Replay checker for recorded sequences. It deliberately shares no code with
// the planners: connectivity, leaf tests and both BFS distances are
// recomputed here from plain coordinate sets.

#include <optional>
#include <string>
#include <vector>

#include "polyreconf/harness/record.hpp"

namespace polyreconf::harness {

struct StepCheck {
  std::size_t index = 0;
  bool ok = true;
  std::string error; // IllegalPickup, IllegalPlacement, DisconnectedResult,
                     // PickupDistanceMismatch, DropoffDistanceMismatch
  int pickup_distance = 0;   // recomputed
  int dropoff_distance = 0;  // recomputed
};

struct ValidationReport {
  bool ok = true;
  std::vector<StepCheck> steps;
  std::optional<std::size_t> first_failure;
  std::string failure; // first error, including end-of-sequence checks
  bool reached_goal = false;
  std::int64_t carry_time = 0;
  std::int64_t empty_travel_time = 0;
  std::int64_t total_cost = 0;
  bool totals_match = false;
};

/// Replays `record.sequence` from the instance start with no initial robot
/// position. Solved records must end at the goal and report matching totals.
ValidationReport validate_record(const MapInstance &instance, const RunRecord &record);

nlohmann::ordered_json to_json(const ValidationReport &report);

} // namespace polyreconf::harness
