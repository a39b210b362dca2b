#include "polyreconf/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "polyreconf/rrt_star.hpp"

namespace polyreconf {

namespace {

constexpr int kMargin = 2;

// Outline of a "c" opening to the right at x = x0 .. x0 + width - 1, with the
// gap sitting below row `upper_terminal`.
struct COutline {
  int width;
  int height;
  int upper_terminal;
};

COutline c_outline_for(int width, int height) { return {width, height, (height - 3) / 2}; }

void add_c(std::vector<Cell> &start, std::vector<Cell> &goal, const COutline &c, int x0, int y0,
           int direction) {
  // direction = +1 opens to the right of x0, -1 mirrors to the left.
  const int last = c.width - 1;
  auto at = [&](int dx, int y) { return Cell{x0 + direction * dx, y0 + y}; };
  std::vector<Cell> shared;
  for (int dx = 1; dx <= last; ++dx) {
    shared.push_back(at(dx, 0));
    shared.push_back(at(dx, c.height - 1));
  }
  const int t = c.upper_terminal;
  for (int y = 1; y < t; ++y)
    shared.push_back(at(last, y));
  for (int y = t + 3; y < c.height - 1; ++y)
    shared.push_back(at(last, y));
  start.insert(start.end(), shared.begin(), shared.end());
  goal.insert(goal.end(), shared.begin(), shared.end());
  start.push_back(at(last, t));
  goal.push_back(at(last, t + 2));
}

std::string format_density(double density) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", density);
  return buffer;
}

} // namespace

InstanceSpec gen_obstacle_detour(int n, int k) {
  if (n < 1 || k < 0)
    throw PlanningError(Errc::invalid_params, "detour instance needs n >= 1 and k >= 0");
  const int width = std::max(n, k) + 2 * kMargin;
  const int height = 5;
  GridMap map(width, height);
  const int wall_x0 = (width - k) / 2;
  for (int x = wall_x0; x < wall_x0 + k; ++x)
    map.set_obstacle({x, 2});
  const int row_x0 = (width - n) / 2;
  std::vector<Cell> start, goal;
  for (int x = row_x0; x < row_x0 + n; ++x) {
    start.push_back({x, 1});
    goal.push_back({x, 3});
  }
  return {std::move(map), Configuration(std::move(start)), Configuration(std::move(goal)),
          "detour-n" + std::to_string(n) + "-k" + std::to_string(k)};
}

InstanceSpec gen_c_shape(int n) {
  if (n < 12)
    throw PlanningError(Errc::too_small, "c-shape needs at least 12 tiles");
  // Outline tiles: 2 * width + 2 * height - 6; an odd n gets one extra tile
  // on the outside of the left edge.
  const int even = n - (n % 2);
  const int half = (even + 6) / 2;
  const int height = std::max(6, (half + 1) / 2);
  const int width = half - height;
  const COutline c = c_outline_for(width, height);

  const int x0 = kMargin + 1;
  const int y0 = kMargin;
  std::vector<Cell> start, goal;
  for (int y = 0; y < height; ++y) {
    start.push_back({x0, y0 + y});
    goal.push_back({x0, y0 + y});
  }
  add_c(start, goal, c, x0, y0, +1);
  if (n % 2 == 1) {
    start.push_back({x0 - 1, y0 + height / 2});
    goal.push_back({x0 - 1, y0 + height / 2});
  }
  GridMap map(width + 2 * kMargin + 1, height + 2 * kMargin);
  return {std::move(map), Configuration(std::move(start)), Configuration(std::move(goal)),
          "c-shape-n" + std::to_string(n)};
}

InstanceSpec gen_cc_shape(int n) {
  // Tiles: 4 * width + 3 * height - 12 for two c's of the given outline
  // sharing their left edge.
  const double target = (n + 12) / 7.0;
  int best_height = -1;
  for (int height = 6; 3 * height <= n; ++height) {
    const int rest = n + 12 - 3 * height;
    if (rest % 4 != 0 || rest / 4 < 3)
      continue;
    if (best_height < 0 || std::abs(height - target) < std::abs(best_height - target))
      best_height = height;
  }
  if (n < 18 || best_height < 0)
    throw PlanningError(Errc::too_small,
                        "no mirrored c-shape with " + std::to_string(n) + " tiles");
  const int height = best_height;
  const int width = (n + 12 - 3 * height) / 4;
  const COutline c = c_outline_for(width, height);

  const int spine = kMargin + width - 1;
  const int y0 = kMargin;
  std::vector<Cell> start, goal;
  for (int y = 0; y < height; ++y) {
    start.push_back({spine, y0 + y});
    goal.push_back({spine, y0 + y});
  }
  add_c(start, goal, c, spine, y0, +1);
  add_c(start, goal, c, spine, y0, -1);
  GridMap map(2 * width - 1 + 2 * kMargin, height + 2 * kMargin);
  return {std::move(map), Configuration(std::move(start)), Configuration(std::move(goal)),
          "cc-shape-n" + std::to_string(n)};
}

InstanceSpec gen_random_map(int width, int height, std::size_t n, double density,
                            std::uint64_t seed) {
  if (!(density >= 0.0 && density < 1.0))
    throw PlanningError(Errc::invalid_params, "density must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  const GridMap empty(width, height);

  Configuration start, goal;
  try {
    start = sample_random_config(empty, n, rng);
    GridMap without_start = empty;
    for (Cell c : start)
      without_start.set_obstacle(c);
    goal = sample_random_config(without_start, n, rng);
  } catch (const PlanningError &e) {
    throw PlanningError(Errc::infeasible, std::string("cannot place polyominoes: ") + e.what());
  }

  // Reserve both polyominoes and a random monotone corridor between their
  // closest cells.
  std::vector<char> reserved(empty.cell_count(), 0);
  for (Cell c : start)
    reserved[empty.index(c)] = 1;
  for (Cell c : goal)
    reserved[empty.index(c)] = 1;
  Cell from = *start.begin(), to = *goal.begin();
  for (Cell a : start)
    for (Cell b : goal)
      if (manhattan(a, b) < manhattan(from, to)) {
        from = a;
        to = b;
      }
  std::vector<Cell> steps;
  for (int i = 0; i < std::abs(to.x - from.x); ++i)
    steps.push_back({to.x > from.x ? 1 : -1, 0});
  for (int i = 0; i < std::abs(to.y - from.y); ++i)
    steps.push_back({0, to.y > from.y ? 1 : -1});
  std::shuffle(steps.begin(), steps.end(), rng);
  for (Cell step : steps) {
    from = from + step;
    reserved[empty.index(from)] = 1;
  }

  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < reserved.size(); ++i)
    if (!reserved[i])
      open.push_back(i);
  const auto wanted = static_cast<std::size_t>(
      std::llround(density * static_cast<double>(empty.cell_count())));
  if (wanted > open.size())
    throw PlanningError(Errc::infeasible, "density " + format_density(density) +
                                              " leaves no room for start, goal and corridor");
  GridMap map = empty;
  for (std::size_t i = 0; i < wanted; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i, open.size() - 1)(rng);
    std::swap(open[i], open[j]);
    map.set_obstacle(map.cell_at(open[i]));
  }

  return {std::move(map), std::move(start), std::move(goal),
          "random-" + std::to_string(width) + "x" + std::to_string(height) + "-n" +
              std::to_string(n) + "-d" + format_density(density) + "-s" + std::to_string(seed)};
}

} // namespace polyreconf
