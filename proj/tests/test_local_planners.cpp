#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polyreconf/fixtures.hpp"
#include "polyreconf/local_planners.hpp"
#include "polyreconf/matching.hpp"
#include "support.hpp"

using namespace polyreconf;

namespace {

Errc error_of(auto &&fn) {
  try {
    fn();
  } catch (const PlanningError &e) {
    return e.code();
  }
  FAIL("expected PlanningError");
  return Errc::parse_error;
}

Configuration row(int x0, int y, int n) {
  std::vector<Cell> cells;
  for (int x = x0; x < x0 + n; ++x)
    cells.push_back({x, y});
  return Configuration(cells);
}

// Connected version of the three-tile example: a cup whose bottom middle tile
// joins the two arms and must move up between them.
struct StuckInstance {
  GridMap map{5, 4};
  Configuration start{{1, 1}, {3, 1}, {1, 2}, {2, 2}, {3, 2}};
  Configuration goal{{1, 1}, {2, 1}, {3, 1}, {1, 2}, {3, 2}};
};

// Expected GLC move computed from the exhaustive move list.
oracle::Move expected_glc(const GridMap &map, const Configuration &s, const Configuration &g) {
  const auto moves = oracle::all_moves(map, s);
  REQUIRE_FALSE(moves.empty());
  if (overlap(s, g) == 0) {
    const auto free = oracle::free_cells(map);
    std::optional<Cell> ge;
    int gap = -1;
    for (Cell c : g) {
      int best = -1;
      for (Cell t : s) {
        const auto d = oracle::relax(free, t);
        if (auto it = d.find(c); it != d.end() && (best < 0 || it->second < best))
          best = it->second;
      }
      if (best >= 0 && (gap < 0 || best < gap)) {
        gap = best;
        ge = c;
      }
    }
    REQUIRE(ge);
    const auto to_goal = oracle::relax(free, *ge);
    const oracle::Move *pick = nullptr;
    auto key = [&](const oracle::Move &m) {
      return std::tuple(to_goal.at(m.target), m.target, m.carry, m.source);
    };
    for (const auto &m : moves)
      if (!pick || key(m) < key(*pick))
        pick = &m;
    return *pick;
  }
  const auto comp = largest_overlap_component(s, g);
  const std::set<Cell> in_m(comp.begin(), comp.end());
  const oracle::Move *pick = nullptr;
  for (const auto &m : moves) {
    if (in_m.count(m.source) || !g.contains(m.target))
      continue;
    bool borders = false;
    for (Cell d : kNeighborOffsets)
      borders = borders || in_m.count(m.target + d);
    if (!borders)
      continue;
    if (!pick || std::tie(m.carry, m.source, m.target) <
                     std::tie(pick->carry, pick->source, pick->target))
      pick = &m;
  }
  REQUIRE(pick);
  return *pick;
}

struct RandomInstance {
  GridMap map;
  Configuration s, g;
};

std::optional<RandomInstance> random_instance(std::mt19937_64 &rng, int w, int h, double density,
                                              std::size_t n) {
  GridMap map = oracle::random_obstacles(w, h, density, rng);
  const auto s = oracle::random_polyomino(map, n, rng);
  const auto g = oracle::random_polyomino(map, n, rng);
  if (!s || !g || !same_free_component(map, *s, *g))
    return std::nullopt;
  return RandomInstance{std::move(map), *s, *g};
}

void check_distances(const GridMap &map, const Configuration &start,
                     const std::vector<PlanStep> &steps) {
  std::optional<Cell> robot;
  Configuration current = start;
  for (const auto &step : steps) {
    REQUIRE(step.before == current);
    const auto tiles = oracle::as_set(current);
    auto carry_set = tiles;
    carry_set.insert(step.dropoff.target);
    CHECK(step.dropoff.dropoff_distance ==
          oracle::relax(carry_set, step.dropoff.source).at(step.dropoff.target));
    CHECK(step.dropoff.pickup_distance ==
          (robot ? oracle::relax(tiles, *robot).at(step.dropoff.source) : 0));
    CHECK(oracle::connected(oracle::as_set(step.after)));
    for (Cell c : step.after)
      CHECK(map.is_free(c));
    robot = step.dropoff.target;
    current = step.after;
  }
}

} // namespace

TEST_CASE("apply_dropoff recomputes both distances") {
  const GridMap map(5, 3);
  const Configuration s{{0, 0}, {1, 0}};
  const auto applied = apply_dropoff(s, RobotState{Cell{1, 0}}, Dropoff{{0, 0}, {2, 0}, 0, 0}, map);
  CHECK(applied.after == Configuration{{1, 0}, {2, 0}});
  CHECK(applied.dropoff.pickup_distance == 1);
  CHECK(applied.dropoff.dropoff_distance == 2);
  CHECK(applied.robot.position == Cell{2, 0});
  CHECK(apply_dropoff(s, {}, Dropoff{{0, 0}, {2, 0}, 9, 9}, map).dropoff.pickup_distance == 0);
}

TEST_CASE("apply_dropoff rejects illegal moves") {
  GridMap map(5, 3);
  map.set_obstacle({3, 0});
  const Configuration tromino{{0, 0}, {1, 0}, {2, 0}};
  CHECK(error_of([&] { apply_dropoff(tromino, {}, {{0, 0}, {0, 0}}, map); }) ==
        Errc::illegal_placement);
  CHECK(error_of([&] { apply_dropoff(tromino, {}, {{1, 0}, {1, 1}}, map); }) == Errc::illegal_pickup);
  CHECK(error_of([&] { apply_dropoff(tromino, {}, {{4, 2}, {1, 1}}, map); }) == Errc::illegal_pickup);
  CHECK(error_of([&] { apply_dropoff(tromino, {}, {{0, 0}, {3, 0}}, map); }) ==
        Errc::illegal_placement);
  CHECK(error_of([&] { apply_dropoff(tromino, {}, {{0, 0}, {2, 0}}, map); }) ==
        Errc::illegal_placement);
  // Touches only the vacated cell.
  CHECK(error_of([&] { apply_dropoff(tromino, {}, {{0, 0}, {0, 1}}, map); }) ==
        Errc::illegal_placement);
}

TEST_CASE("single tile may step to a neighbor only") {
  const GridMap map(4, 4);
  const Configuration one{{1, 1}};
  CHECK(apply_dropoff(one, {}, {{1, 1}, {2, 1}}, map).after == Configuration{{2, 1}});
  CHECK_THROWS_AS(apply_dropoff(one, {}, {{1, 1}, {3, 1}}, map), PlanningError);
}

TEST_CASE("is_valid_dropoff agrees with exhaustive enumeration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const GridMap map = oracle::random_obstacles(7, 7, 0.15, rng);
    const auto s = oracle::random_polyomino(map, 1 + trial % 9, rng);
    if (!s)
      continue;
    const auto leaves = leaf_tiles(*s);
    std::set<std::pair<Cell, Cell>> expected;
    for (const auto &m : oracle::all_moves(map, *s))
      expected.insert({m.source, m.target});
    for (Cell p : *s)
      for (int y = -1; y <= 7; ++y)
        for (int x = -1; x <= 7; ++x) {
          const bool valid = is_valid_dropoff(map, *s, leaves, p, {x, y});
          CHECK(valid == static_cast<bool>(expected.count({p, Cell{x, y}})));
        }
  }
}

TEST_CASE("GLC domino example skips the disconnecting pair") {
  const GridMap map(9, 3);
  const Configuration s{{0, 0}, {1, 0}};
  const Configuration g{{5, 0}, {6, 0}};
  const auto step = glc_step(s, g, map);
  REQUIRE(step.status == StepStatus::moved);
  CHECK(step.dropoff.source == Cell{0, 0});
  CHECK(step.dropoff.target == Cell{2, 0});
  const auto expected = expected_glc(map, s, g);
  CHECK(step.dropoff.source == expected.source);
  CHECK(step.dropoff.target == expected.target);
}

TEST_CASE("GLC fills the hole next to the overlap component") {
  const GridMap map(6, 5);
  std::vector<Cell> square;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x)
      square.push_back({x, y});
  const Configuration g(square);
  const Configuration s = g.moved({2, 2}, {3, 1});
  const auto step = glc_step(s, g, map);
  REQUIRE(step.status == StepStatus::moved);
  CHECK(step.dropoff.source == Cell{3, 1});
  CHECK(step.dropoff.target == Cell{2, 2});
  const auto expected = expected_glc(map, s, g);
  CHECK(step.dropoff.source == expected.source);
  CHECK(step.dropoff.target == expected.target);
  CHECK(step.dropoff.dropoff_distance == expected.carry);
}

TEST_CASE("GLC steps match the exhaustive selection on random instances") {
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto inst = random_instance(rng, 9, 9, 0.15, 2 + trial % 6);
    if (!inst || inst->s == inst->g)
      continue;
    // Walk a few steps so both branches are exercised.
    Configuration current = inst->s;
    for (int k = 0; k < 6 && current != inst->g; ++k) {
      const auto step = glc_step(current, inst->g, inst->map);
      REQUIRE(step.status == StepStatus::moved);
      const auto expected = expected_glc(inst->map, current, inst->g);
      CHECK(step.dropoff.source == expected.source);
      CHECK(step.dropoff.target == expected.target);
      CHECK(step.dropoff.dropoff_distance == expected.carry);
      current = current.moved(step.dropoff.source, step.dropoff.target);
      ++checked;
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("GLC at the goal") {
  const GridMap map(4, 4);
  const Configuration s{{0, 0}, {1, 0}};
  CHECK(glc_step(s, s, map).status == StepStatus::already_at_goal);
  CHECK(glc_solve(s, s, map).empty());
}

TEST_CASE("glc_solve preconditions and budget") {
  GridMap map(7, 3);
  for (int y = 0; y < 3; ++y)
    map.set_obstacle({3, y});
  const Configuration left{{0, 0}, {1, 0}};
  const Configuration right{{5, 0}, {6, 0}};
  CHECK(error_of([&] { glc_solve(left, right, map); }) == Errc::separate_components);
  CHECK(error_of([&] { glc_solve(left, Configuration{{5, 0}}, map); }) == Errc::size_mismatch);
  const GridMap open(12, 3);
  CHECK(error_of([&] { glc_solve(left, Configuration{{9, 0}, {10, 0}}, open, 2); }) ==
        Errc::budget_exceeded);
}

TEST_CASE("row shift by its own length costs quadratic travel time") {
  std::vector<double> xs, ys;
  for (int n : {4, 8, 16, 32}) {
    const GridMap map(2 * n + 2, 3);
    const auto steps = glc_solve(row(0, 1, n), row(n, 1, n), map);
    const auto costs = sequence_costs(steps);
    check_distances(map, row(0, 1, n), steps);
    xs.push_back(std::log(n));
    ys.push_back(std::log(static_cast<double>(costs.total)));
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4, my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  const double exponent = num / den;
  MESSAGE("fitted exponent " << exponent);
  CHECK(exponent > 1.8);
  CHECK(exponent < 2.2);
}

TEST_CASE("GLC on c-shapes pays at least a quarter of the perimeter") {
  for (int n : {24, 48, 96}) {
    const auto inst = gen_c_shape(n);
    const auto steps = glc_solve(inst.start, inst.goal, inst.map);
    check_distances(inst.map, inst.start, steps);
    CHECK(sequence_costs(steps).total >= n / 4);
  }
}

TEST_CASE("glc_solve on random instances keeps every step valid and grows the overlap") {
  std::mt19937_64 rng(33);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto inst = random_instance(rng, 12, 12, 0.1 * (trial % 7), 2 + trial % 19);
    if (!inst)
      continue;
    const auto steps = glc_solve(inst->s, inst->g, inst->map);
    ++solved;
    check_distances(inst->map, inst->s, steps);
    if (!steps.empty())
      CHECK(steps.back().after == inst->g);
    std::size_t previous = 0, stall = 0;
    for (const auto &step : steps) {
      if (overlap(step.before, inst->g) == 0)
        continue;
      const std::size_t size = largest_overlap_component(step.after, inst->g).size();
      CHECK(size >= previous);
      stall = size > previous ? 0 : stall + 1;
      CHECK(stall < inst->s.size());
      previous = size;
    }
  }
  CHECK(solved > 60);
}

TEST_CASE("MWPM expansion gets stuck when only a cut tile is mismatched") {
  const GridMap line_map(3, 2);
  const Configuration line{{0, 0}, {1, 0}, {2, 0}};
  const Configuration bent{{0, 0}, {1, 1}, {2, 0}};
  CHECK(mwpm_expand_step(line, bent, line_map).status == StepStatus::stuck);

  const StuckInstance inst;
  CHECK(mwpm_expand_step(inst.start, inst.goal, inst.map).status == StepStatus::stuck);
  const auto result = mwpm_expand_solve(inst.start, inst.goal, inst.map);
  CHECK(result.status == SolveStatus::stuck);
  CHECK(result.steps.empty());
  CHECK(glc_solve(inst.start, inst.goal, inst.map).back().after == inst.goal);
}

TEST_CASE("MWPM expansion follows its selection rule") {
  std::mt19937_64 rng(34);
  int checked = 0;
  // Passes: goal-keeping matching then plain matching, first only with
  // placements that shorten the pair's distance, then with any placement.
  auto check_step = [&](const GridMap &map, const Configuration &s, const Configuration &g) {
    const auto step = mwpm_expand_step(s, g, map);
    const auto leaves = oracle::leaves(s);
    const auto moves = oracle::all_moves(map, s);
    const auto free = oracle::free_cells(map);
    for (bool closer_only : {true, false})
      for (bool keep_goals : {true, false}) {
        std::vector<oracle::Pair> pairs;
        for (const auto &p : oracle::enumerated_matching(map, s, g, keep_goals))
          if (p.distance > 0 && leaves.count(p.start))
            pairs.push_back(p);
        std::stable_sort(pairs.begin(), pairs.end(),
                         [](const auto &a, const auto &b) { return a.distance > b.distance; });
        for (const auto &pair : pairs) {
          const auto to_goal = oracle::relax(free, pair.goal);
          const oracle::Move *pick = nullptr;
          for (const auto &m : moves)
            if (m.source == pair.start && (!closer_only || to_goal.at(m.target) < pair.distance) &&
                (!pick || std::pair(to_goal.at(m.target), m.target) <
                              std::pair(to_goal.at(pick->target), pick->target)))
              pick = &m;
          if (!pick)
            continue;
          REQUIRE(step.status == StepStatus::moved);
          CHECK(step.dropoff.source == pick->source);
          CHECK(step.dropoff.target == pick->target);
          CHECK(step.dropoff.dropoff_distance == pick->carry);
          ++checked;
          return;
        }
      }
    CHECK(step.status == StepStatus::stuck);
  };

  const GridMap rows_map(7, 5);
  const auto top = row(2, 1, 3), bottom = row(2, 3, 3);
  check_step(rows_map, top, bottom);
  const auto first = mwpm_expand_step(top, bottom, rows_map);
  REQUIRE(first.status == StepStatus::moved);
  // The moved leaf lands one step from the goal cell it was two steps from.
  CHECK(first.dropoff.source.y == 1);
  CHECK(first.dropoff.target.y == 2);
  for (int trial = 0; trial < 150; ++trial)
    if (auto inst = random_instance(rng, 9, 9, 0.15, 2 + trial % 6); inst && inst->s != inst->g)
      check_step(inst->map, inst->s, inst->g);
  CHECK(checked > 80);
}

TEST_CASE("mwpm_expand_solve outcomes") {
  const GridMap map(9, 5);
  const Configuration square{{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  const Configuration shifted{{4, 1}, {5, 1}, {4, 2}, {5, 2}};
  const auto result = mwpm_expand_solve(square, shifted, map);
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.steps.back().after == shifted);
  check_distances(map, square, result.steps);
  CHECK(mwpm_expand_solve(square, square, map).steps.empty());
  CHECK(mwpm_expand_solve(square, square, map).status == SolveStatus::solved);

  // A domino inches diagonally instead of rocking in place.
  const GridMap open(30, 30);
  const Configuration domino{{10, 10}, {10, 11}}, far_domino{{3, 3}, {3, 4}};
  const auto inched = mwpm_expand_solve(domino, far_domino, open);
  REQUIRE(inched.status == SolveStatus::solved);
  check_distances(open, domino, inched.steps);

  // A column has no sideways leaf move that shortens a matched distance;
  // the solver detours instead of returning to a visited configuration.
  std::vector<Cell> column, left;
  for (int y = 10; y < 15; ++y) {
    column.push_back({10, y});
    left.push_back({6, y});
  }
  const auto detoured = mwpm_expand_solve(Configuration(column), Configuration(left), open);
  REQUIRE(detoured.status == SolveStatus::solved);
  check_distances(open, Configuration(column), detoured.steps);
  CHECK(mwpm_expand_step(Configuration(column), Configuration(left), open).status ==
        StepStatus::moved);

  // A row shifted diagonally ends with every mismatched tile a cut vertex.
  std::vector<Cell> line, shifted_line;
  for (int x = 11; x < 16; ++x) {
    line.push_back({x, 10});
    shifted_line.push_back({x - 1, 11});
  }
  const auto blocked = mwpm_expand_solve(Configuration(line), Configuration(shifted_line), open);
  CHECK(blocked.status == SolveStatus::stuck);
  CHECK(blocked.steps.size() == 2);
}

TEST_CASE("mwpm_expand_solve never ends away from the goal when it claims success") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_instance(rng, 10, 10, 0.1 * (trial % 5), 2 + trial % 10);
    if (!inst)
      continue;
    const auto result = mwpm_expand_solve(inst->s, inst->g, inst->map);
    check_distances(inst->map, inst->s, result.steps);
    if (result.status == SolveStatus::solved && !result.steps.empty())
      CHECK(result.steps.back().after == inst->g);
    const auto replayed = replay(inst->s, [&] {
      std::vector<Dropoff> moves;
      for (const auto &s : result.steps)
        moves.push_back(s.dropoff);
      return moves;
    }(), inst->map);
    CHECK(replayed.size() == result.steps.size());
  }
}

TEST_CASE("sequence costs") {
  CHECK(sequence_costs({}).total == 0);
  const Configuration a{{0, 0}, {1, 0}};
  const Configuration b{{1, 0}, {2, 0}};
  const std::vector<PlanStep> one{{a, Dropoff{{0, 0}, {2, 0}, 1, 2}, b}};
  const auto costs = sequence_costs(one);
  CHECK(costs.carry_time == 2);
  CHECK(costs.empty_travel_time == 1);
  CHECK(costs.total == 3);
  const std::vector<PlanStep> broken{one[0], one[0]};
  CHECK(error_of([&] { sequence_costs(broken); }) == Errc::broken_chain);
}

TEST_CASE("local planner names") {
  CHECK(local_planner_from_string("glc") == LocalPlanner::glc);
  CHECK(local_planner_from_string("mwpm-expand") == LocalPlanner::mwpm_expand);
  CHECK_FALSE(local_planner_from_string("rrt"));
  CHECK(to_string(LocalPlanner::mwpm_expand) == "mwpm-expand");
}
