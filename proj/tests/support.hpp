#pragma once

// Oracles and generators for the test suites. Nothing here calls planner
// code: connectivity is a naive flood fill, distances come from repeated
// relaxation until a fixed point.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "polyreconf/grid.hpp"

namespace oracle {

using polyreconf::Cell;
using polyreconf::Configuration;
using polyreconf::GridMap;

inline bool connected(const std::set<Cell> &cells) {
  if (cells.empty())
    return true;
  std::set<Cell> seen{*cells.begin()};
  std::vector<Cell> stack{*cells.begin()};
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
      const Cell n{c.x + d.x, c.y + d.y};
      if (cells.count(n) && seen.insert(n).second)
        stack.push_back(n);
    }
  }
  return seen.size() == cells.size();
}

inline std::set<Cell> as_set(const Configuration &c) { return {c.begin(), c.end()}; }

inline std::set<Cell> leaves(const Configuration &config) {
  const auto all = as_set(config);
  if (all.size() == 1)
    return all;
  std::set<Cell> out;
  for (Cell t : all) {
    auto rest = all;
    rest.erase(t);
    if (connected(rest))
      out.insert(t);
  }
  return out;
}

/// Shortest path lengths over `cells` by Bellman-Ford style relaxation.
inline std::map<Cell, int> relax(const std::set<Cell> &cells, Cell source) {
  std::map<Cell, int> dist;
  if (!cells.count(source))
    return dist;
  dist[source] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (Cell c : cells) {
      for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
        const Cell n{c.x + d.x, c.y + d.y};
        auto it = dist.find(n);
        if (it == dist.end())
          continue;
        auto mine = dist.find(c);
        if (mine == dist.end() || mine->second > it->second + 1) {
          dist[c] = it->second + 1;
          changed = true;
        }
      }
    }
  }
  return dist;
}

inline std::set<Cell> free_cells(const GridMap &map) {
  std::set<Cell> out;
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x)
      if (!map.is_obstacle({x, y}))
        out.insert({x, y});
  return out;
}

inline int free_distance(const GridMap &map, Cell a, Cell b) {
  const auto d = relax(free_cells(map), a);
  auto it = d.find(b);
  return it == d.end() ? -1 : it->second;
}

struct Move {
  Cell source;
  Cell target;
  int carry = 0;
};

/// Every legal dropoff: leaf pickup, free unoccupied target touching the rest
/// (or the source for a single tile), connected result.
inline std::vector<Move> all_moves(const GridMap &map, const Configuration &config) {
  const auto tiles = as_set(config);
  std::vector<Move> out;
  for (Cell p : leaves(config)) {
    auto rest = tiles;
    rest.erase(p);
    std::set<Cell> targets;
    const auto &anchor = rest.empty() ? std::set<Cell>{p} : rest;
    for (Cell c : anchor)
      for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
        const Cell n{c.x + d.x, c.y + d.y};
        if (!map.is_obstacle(n) && !tiles.count(n))
          targets.insert(n);
      }
    for (Cell t : targets) {
      auto after = rest;
      after.insert(t);
      if (!connected(after))
        continue;
      auto carry_set = tiles;
      carry_set.insert(t);
      out.push_back({p, t, relax(carry_set, p).at(t)});
    }
  }
  return out;
}

struct Pair {
  Cell start;
  Cell goal;
  int distance = 0;
};

/// Optimal matching by permutation enumeration: least total distance, then
/// (when `keep_goals`) most tiles left on their own goal cell, then the
/// lexicographically smallest goal index sequence.
inline std::vector<Pair> enumerated_matching(const GridMap &map, const Configuration &s,
                                             const Configuration &g, bool keep_goals) {
  const std::vector<Cell> rows(s.begin(), s.end()), cols(g.begin(), g.end());
  const auto free = free_cells(map);
  std::vector<std::vector<int>> d(rows.size(), std::vector<int>(cols.size(), -1));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto field = relax(free, rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (auto it = field.find(cols[j]); it != field.end())
        d[i][j] = it->second;
  }
  std::vector<std::size_t> perm(cols.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    perm[i] = i;
  std::optional<std::tuple<long, long, std::vector<std::size_t>>> best;
  do {
    long cost = 0, moved = 0;
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i) {
      ok = d[i][perm[i]] >= 0;
      cost += d[i][perm[i]];
      moved += keep_goals && d[i][perm[i]] > 0;
    }
    if (ok && (!best || std::tie(cost, moved, perm) < std::tie(std::get<0>(*best), std::get<1>(*best),
                                                                std::get<2>(*best))))
      best = std::tuple(cost, moved, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<Pair> out;
  if (best)
    for (std::size_t i = 0; i < rows.size(); ++i)
      out.push_back({rows[i], cols[std::get<2>(*best)[i]], d[i][std::get<2>(*best)[i]]});
  return out;
}

inline std::vector<Pair> goal_preserving_matching(const GridMap &map, const Configuration &s,
                                                  const Configuration &g) {
  return enumerated_matching(map, s, g, true);
}

/// Random polyomino grown from a random free cell by uniform frontier picks.
/// Returns nullopt when the seed's component is too small.
inline std::optional<Configuration> random_polyomino(const GridMap &map, std::size_t n,
                                                     std::mt19937_64 &rng) {
  const auto free = free_cells(map);
  if (free.empty())
    return std::nullopt;
  std::vector<Cell> pool(free.begin(), free.end());
  std::set<Cell> tiles{pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]};
  while (tiles.size() < n) {
    std::set<Cell> frontier;
    for (Cell c : tiles)
      for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
        const Cell nb{c.x + d.x, c.y + d.y};
        if (!map.is_obstacle(nb) && !tiles.count(nb))
          frontier.insert(nb);
      }
    if (frontier.empty())
      return std::nullopt;
    std::vector<Cell> f(frontier.begin(), frontier.end());
    tiles.insert(f[std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng)]);
  }
  return Configuration(std::vector<Cell>(tiles.begin(), tiles.end()));
}

/// Map with i.i.d. obstacles at probability `p`.
inline GridMap random_obstacles(int w, int h, double p, std::mt19937_64 &rng) {
  GridMap map(w, h);
  std::bernoulli_distribution coin(p);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (coin(rng))
        map.set_obstacle({x, y});
  return map;
}

} // namespace oracle
