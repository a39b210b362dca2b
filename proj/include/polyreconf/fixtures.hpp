#pragma once

// Deterministic instance generators: the detour and c-shape constructions
// that separate matching cost from true travel time, and seeded random
// benchmark maps.

#include <cstdint>
#include <string>

#include "polyreconf/map_io.hpp"

namespace polyreconf {

struct InstanceSpec {
  GridMap map;
  Configuration start;
  Configuration goal;
  std::string label;

  MapInstance as_map() const { return {map, start, goal}; }
};

/// Two horizontal rows of n tiles two units apart (start above goal) with a
/// horizontal wall of k obstacle cells centered on the row between them.
InstanceSpec gen_obstacle_detour(int n, int k);

/// Square-like "c" open to the right with a two-cell gap between its
/// terminals; the goal moves the upper terminal tile across the gap.
/// Throws too_small for n < 12.
InstanceSpec gen_c_shape(int n);

/// The c mirrored about its left edge so that both halves share that edge;
/// the goal moves one terminal tile across each gap. Throws too_small for
/// n < 18.
InstanceSpec gen_cc_shape(int n);

/// Uniformly placed obstacles covering round(density * width * height)
/// cells (whole-grid count). Start and goal are random polyominoes joined by a
/// random monotone corridor that is kept free, so both always share a
/// free-space component. Throws infeasible when the reserved cells leave no
/// room for the requested density.
InstanceSpec gen_random_map(int width, int height, std::size_t n, double density,
                            std::uint64_t seed);

} // namespace polyreconf
