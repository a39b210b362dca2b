#pragma once

#include <cstdint>
#include <vector>

#include "polyreconf/grid.hpp"

namespace polyreconf {

/// Square matrix of geodesic start-to-goal distances. Unreachable pairs hold
/// `sentinel`, which exceeds the cost of any all-finite perfect matching.
struct DistanceMatrix {
  std::vector<Cell> rows; // start tiles, canonical order
  std::vector<Cell> cols; // goal tiles, canonical order
  std::vector<std::int64_t> d;
  std::int64_t sentinel = 0;

  std::size_t size() const noexcept { return rows.size(); }
  std::int64_t at(std::size_t i, std::size_t j) const { return d[i * cols.size() + j]; }
  std::int64_t &at(std::size_t i, std::size_t j) { return d[i * cols.size() + j]; }
  bool reachable(std::size_t i, std::size_t j) const { return at(i, j) < sentinel; }

  /// Matrix over anonymous indices, for callers that only have costs.
  static DistanceMatrix from_costs(std::size_t n, std::vector<std::int64_t> costs,
                                   std::int64_t sentinel);
};

struct MatchedPair {
  Cell start;
  Cell goal;
  std::int64_t distance = 0;
  std::size_t row = 0;
  std::size_t col = 0;
};

struct Matching {
  std::vector<MatchedPair> pairs; // one per row, in row order
  std::int64_t total_cost = 0;
};

/// One BFS over free space per start tile. Throws size_mismatch when the
/// tile counts differ.
DistanceMatrix distance_matrix(const GridMap &map, const Configuration &s,
                               const Configuration &g);

/// Minimum-cost perfect matching (Hungarian method, O(n^3)). Among optimal
/// matchings returns the one whose column sequence is lexicographically
/// smallest. Throws infeasible if the optimum needs an unreachable entry.
Matching min_weight_perfect_matching(const DistanceMatrix &dm);

} // namespace polyreconf
