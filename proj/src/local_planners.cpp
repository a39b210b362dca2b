#include "polyreconf/local_planners.hpp"

#include <algorithm>
#include <optional>
#include <tuple>
#include <unordered_set>

#include "polyreconf/matching.hpp"

namespace polyreconf {

namespace {

std::string describe(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

bool touches_remainder(const Configuration &config, Cell source, Cell target) {
  if (config.size() == 1)
    return adjacent(source, target);
  for (Cell d : kNeighborOffsets) {
    Cell nb = target + d;
    if (nb != source && config.contains(nb))
      return true;
  }
  return false;
}

bool contains_cell(std::span<const Cell> cells, Cell c) {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

std::vector<Cell> with_cell(const Configuration &config, Cell extra) {
  std::vector<Cell> tiles(config.begin(), config.end());
  tiles.push_back(extra);
  return tiles;
}

} // namespace

bool is_valid_dropoff(const GridMap &map, const Configuration &config,
                      std::span<const Cell> leaves, Cell source, Cell target) {
  if (source == target || !config.contains(source) || !contains_cell(leaves, source))
    return false;
  if (map.is_obstacle(target) || config.contains(target))
    return false;
  return touches_remainder(config, source, target);
}

int carry_distance(const Configuration &config, Cell source, Cell target) {
  return bfs_on_tiles(with_cell(config, target), source).at(target);
}

AppliedDropoff apply_dropoff(const Configuration &config, const RobotState &robot,
                             const Dropoff &move, const GridMap &map) {
  const Cell p = move.source;
  const Cell d = move.target;
  if (!config.contains(p))
    throw PlanningError(Errc::illegal_pickup, "no tile at " + describe(p));
  if (p == d)
    throw PlanningError(Errc::illegal_placement, "source and target coincide at " + describe(p));
  const auto leaves = leaf_tiles(config);
  if (!contains_cell(leaves, p))
    throw PlanningError(Errc::illegal_pickup, "tile " + describe(p) + " is not a leaf");
  if (map.is_obstacle(d))
    throw PlanningError(Errc::illegal_placement, "target " + describe(d) + " is not free");
  if (config.contains(d))
    throw PlanningError(Errc::illegal_placement, "target " + describe(d) + " is occupied");
  if (!touches_remainder(config, p, d))
    throw PlanningError(Errc::illegal_placement,
                        "target " + describe(d) + " does not touch the remaining tiles");

  Configuration after = config.moved(p, d);
  if (!is_connected(after.tiles()))
    throw PlanningError(Errc::disconnected_result, "move " + describe(p) + "->" + describe(d));

  Dropoff applied = move;
  applied.pickup_distance = 0;
  if (robot.position) {
    if (!config.contains(*robot.position))
      throw PlanningError(Errc::illegal_pickup,
                          "robot at " + describe(*robot.position) + " is off the structure");
    applied.pickup_distance = bfs_on_tiles(config.tiles(), *robot.position).at(p);
  }
  applied.dropoff_distance = carry_distance(config, p, d);
  return {std::move(after), RobotState{d}, applied};
}

// --- GLC -------------------------------------------------------------------

namespace {

// No overlap yet: walk the structure one cell closer to the nearest goal
// tile.
StepOutcome glc_gap_step(const Configuration &s, const Configuration &g, const GridMap &map) {
  const auto from_start = bfs_free(map, s.tiles());
  std::optional<Cell> goal_end;
  int gap = DistanceField::kUnreachable;
  for (Cell c : g) {
    const int dist = from_start.at(c);
    if (dist != DistanceField::kUnreachable && (gap == DistanceField::kUnreachable || dist < gap)) {
      gap = dist;
      goal_end = c;
    }
  }
  if (!goal_end)
    throw PlanningError(Errc::separate_components,
                        "goal is not reachable from the start through free space");

  const auto to_goal = bfs_free(map, *goal_end);
  auto targets = free_neighbors(map, s);
  std::erase_if(targets, [&](Cell c) { return !to_goal.reachable(c); });
  std::stable_sort(targets.begin(), targets.end(),
                   [&](Cell a, Cell b) { return to_goal.at(a) < to_goal.at(b); });

  const auto leaves = leaf_tiles(s);
  for (Cell target : targets) {
    const auto carry = bfs_on_tiles(with_cell(s, target), target);
    std::vector<Cell> sources = leaves;
    std::stable_sort(sources.begin(), sources.end(),
                     [&](Cell a, Cell b) { return carry.at(a) < carry.at(b); });
    for (Cell source : sources)
      if (is_valid_dropoff(map, s, leaves, source, target))
        return {StepStatus::moved, Dropoff{source, target, 0, carry.at(source)}};
  }
  throw PlanningError(Errc::no_move_found, "GLC found no valid move toward the goal");
}

// Overlap exists: move the closest outside leaf onto a goal cell bordering
// the largest overlap component.
StepOutcome glc_grow_step(const Configuration &s, const Configuration &g, const GridMap &map) {
  const auto component = largest_overlap_component(s, g);
  auto in_component = [&](Cell c) {
    return std::binary_search(component.begin(), component.end(), c);
  };

  std::vector<Cell> border;
  for (Cell c : g) {
    if (in_component(c))
      continue;
    for (Cell d : kNeighborOffsets)
      if (in_component(c + d)) {
        border.push_back(c);
        break;
      }
  }

  const auto leaves = leaf_tiles(s);
  std::vector<Cell> movable;
  for (Cell c : leaves)
    if (!in_component(c))
      movable.push_back(c);

  struct Candidate {
    int distance;
    Cell source;
    Cell target;
  };
  std::vector<Candidate> candidates;
  for (Cell target : border) {
    const auto carry = bfs_on_tiles(with_cell(s, target), target);
    for (Cell source : movable)
      if (carry.reachable(source))
        candidates.push_back({carry.at(source), source, target});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate &a, const Candidate &b) {
    return std::tie(a.distance, a.source, a.target) < std::tie(b.distance, b.source, b.target);
  });
  for (const Candidate &c : candidates)
    if (is_valid_dropoff(map, s, leaves, c.source, c.target))
      return {StepStatus::moved, Dropoff{c.source, c.target, 0, c.distance}};
  throw PlanningError(Errc::no_move_found, "GLC found no leaf to grow the overlap");
}

} // namespace

StepOutcome glc_step(const Configuration &s, const Configuration &g, const GridMap &map) {
  if (s == g)
    return {StepStatus::already_at_goal, {}};
  if (overlap(s, g) == 0)
    return glc_gap_step(s, g, map);
  return glc_grow_step(s, g, map);
}

// --- MWPM expansion --------------------------------------------------------

namespace {

// Among minimum-cost matchings, keep as many tiles as possible matched to
// the goal cell they already occupy; the lexicographic rule only breaks the
// remaining ties. Plain lexicographic ties can route a tile through an
// occupied goal cell and send the expansion into a cycle.
Matching goal_preserving_matching(const GridMap &map, const Configuration &s,
                                  const Configuration &g) {
  const DistanceMatrix dm = distance_matrix(map, s, g);
  const auto scale = static_cast<std::int64_t>(dm.size()) + 1;
  DistanceMatrix scaled = dm;
  for (auto &v : scaled.d)
    v = v * scale + (v > 0 ? 1 : 0);
  scaled.sentinel = dm.sentinel * scale;
  Matching m = min_weight_perfect_matching(scaled);
  m.total_cost = 0;
  for (auto &pair : m.pairs) {
    pair.distance = dm.at(pair.row, pair.col);
    m.total_cost += pair.distance;
  }
  return m;
}

} // namespace

namespace {

using ConfigSet = std::unordered_set<Configuration, ConfigurationHash>;

std::optional<Dropoff> expand_along(const Matching &matching, const Configuration &s,
                                    const GridMap &map, const std::vector<Cell> &leaves,
                                    const std::vector<Cell> &neighbors, bool closer_only,
                                    const ConfigSet *avoid) {
  std::vector<MatchedPair> pairs;
  for (const auto &pair : matching.pairs)
    if (pair.distance > 0 && contains_cell(leaves, pair.start))
      pairs.push_back(pair);
  std::stable_sort(pairs.begin(), pairs.end(), [](const MatchedPair &a, const MatchedPair &b) {
    return a.distance > b.distance;
  });
  for (const auto &pair : pairs) {
    const auto to_goal = bfs_free(map, pair.goal);
    auto targets = neighbors;
    std::erase_if(targets, [&](Cell c) { return !to_goal.reachable(c); });
    std::stable_sort(targets.begin(), targets.end(),
                     [&](Cell a, Cell b) { return to_goal.at(a) < to_goal.at(b); });
    for (Cell target : targets) {
      if (closer_only && to_goal.at(target) >= pair.distance)
        break;
      if (avoid && avoid->contains(s.moved(pair.start, target)))
        continue;
      if (is_valid_dropoff(map, s, leaves, pair.start, target))
        return Dropoff{pair.start, target, 0, carry_distance(s, pair.start, target)};
    }
  }
  return std::nullopt;
}

// `avoid` holds configurations the caller has already passed through.
StepOutcome mwpm_expand_choose(const Configuration &s, const Configuration &g, const GridMap &map,
                               const ConfigSet *avoid) {
  if (s == g)
    return {StepStatus::already_at_goal, {}};
  const auto leaves = leaf_tiles(s);
  const auto neighbors = free_neighbors(map, s);
  const Matching preserving = goal_preserving_matching(map, s, g);
  const Matching plain = min_weight_perfect_matching(distance_matrix(map, s, g));
  // Placements that bring the tile closer come first; keeping tiles on
  // their goals can leave only cut vertices mismatched, in which case the
  // plain lexicographic optimum may spread the mismatch onto a leaf.
  for (bool closer_only : {true, false})
    for (const Matching *m : {&preserving, &plain})
      if (auto move = expand_along(*m, s, map, leaves, neighbors, closer_only, avoid))
        return {StepStatus::moved, *move};
  return {StepStatus::stuck, {}};
}

} // namespace

StepOutcome mwpm_expand_step(const Configuration &s, const Configuration &g, const GridMap &map) {
  return mwpm_expand_choose(s, g, map, nullptr);
}

std::string_view to_string(LocalPlanner planner) noexcept {
  switch (planner) {
  case LocalPlanner::glc: return "glc";
  case LocalPlanner::mwpm_expand: return "mwpm-expand";
  }
  return "unknown";
}

std::optional<LocalPlanner> local_planner_from_string(std::string_view name) noexcept {
  if (name == "glc")
    return LocalPlanner::glc;
  if (name == "mwpm-expand" || name == "mwpm")
    return LocalPlanner::mwpm_expand;
  return std::nullopt;
}

StepOutcome local_step(LocalPlanner planner, const Configuration &s, const Configuration &g,
                       const GridMap &map) {
  return planner == LocalPlanner::glc ? glc_step(s, g, map) : mwpm_expand_step(s, g, map);
}

// --- solvers ---------------------------------------------------------------

std::size_t default_step_budget(std::size_t tiles, const GridMap &map) {
  return 4 * tiles * static_cast<std::size_t>(map.width() + map.height());
}

namespace {

void check_instance(const Configuration &s, const Configuration &g, const GridMap &map) {
  validate(map, s);
  validate(map, g);
  if (s.size() != g.size())
    throw PlanningError(Errc::size_mismatch, "start and goal differ in tile count");
  if (!same_free_component(map, s, g))
    throw PlanningError(Errc::separate_components,
                        "start and goal lie in different free-space components");
}

} // namespace

std::vector<PlanStep> glc_solve(const Configuration &s, const Configuration &g, const GridMap &map,
                                std::optional<std::size_t> step_budget, RobotState robot) {
  check_instance(s, g, map);
  const std::size_t budget = step_budget.value_or(default_step_budget(s.size(), map));
  std::vector<PlanStep> steps;
  Configuration current = s;
  while (current != g) {
    if (steps.size() >= budget)
      throw PlanningError(Errc::budget_exceeded,
                          "GLC exceeded " + std::to_string(budget) + " steps");
    const auto outcome = glc_step(current, g, map);
    auto applied = apply_dropoff(current, robot, outcome.dropoff, map);
    steps.push_back({current, applied.dropoff, applied.after});
    current = std::move(applied.after);
    robot = applied.robot;
  }
  return steps;
}

SolveResult mwpm_expand_solve(const Configuration &s, const Configuration &g, const GridMap &map,
                              std::optional<std::size_t> step_budget, RobotState robot) {
  check_instance(s, g, map);
  const std::size_t budget = step_budget.value_or(default_step_budget(s.size(), map));
  SolveResult result;
  std::unordered_set<Configuration, ConfigurationHash> visited{s};
  Configuration current = s;
  while (current != g) {
    if (result.steps.size() >= budget) {
      result.status = SolveStatus::budget_exceeded;
      return result;
    }
    const auto outcome = mwpm_expand_choose(current, g, map, &visited);
    if (outcome.status != StepStatus::moved) {
      result.status = SolveStatus::stuck;
      return result;
    }
    auto applied = apply_dropoff(current, robot, outcome.dropoff, map);
    if (!visited.insert(applied.after).second) {
      result.status = SolveStatus::stuck;
      return result;
    }
    result.steps.push_back({current, applied.dropoff, applied.after});
    current = std::move(applied.after);
    robot = applied.robot;
  }
  result.status = SolveStatus::solved;
  return result;
}

SequenceCosts sequence_costs(std::span<const PlanStep> steps) {
  SequenceCosts costs;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0 && steps[i].before != steps[i - 1].after)
      throw PlanningError(Errc::broken_chain,
                          "step " + std::to_string(i) + " does not start where step " +
                              std::to_string(i - 1) + " ended");
    if (steps[i].after != steps[i].before.moved(steps[i].dropoff.source, steps[i].dropoff.target))
      throw PlanningError(Errc::broken_chain,
                          "step " + std::to_string(i) + " does not match its dropoff");
    costs.carry_time += steps[i].dropoff.dropoff_distance;
    costs.empty_travel_time += steps[i].dropoff.pickup_distance;
  }
  costs.total = costs.carry_time + costs.empty_travel_time;
  return costs;
}

std::vector<PlanStep> replay(const Configuration &start, std::span<const Dropoff> moves,
                             const GridMap &map, RobotState robot) {
  std::vector<PlanStep> steps;
  steps.reserve(moves.size());
  Configuration current = start;
  for (const Dropoff &move : moves) {
    auto applied = apply_dropoff(current, robot, move, map);
    steps.push_back({current, applied.dropoff, applied.after});
    current = std::move(applied.after);
    robot = applied.robot;
  }
  return steps;
}

} // namespace polyreconf
