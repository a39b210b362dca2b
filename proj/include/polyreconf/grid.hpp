#pragma once

// Workspace, polyomino configurations, and the BFS primitives every planner
// is built on. Adjacency is 4-connectivity throughout.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polyreconf/errors.hpp"

namespace polyreconf {

struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Cell, Cell) = default;

  // Row-major: rows first, then columns.
  friend constexpr std::strong_ordering operator<=>(Cell a, Cell b) {
    if (auto c = a.y <=> b.y; c != 0)
      return c;
    return a.x <=> b.x;
  }
};

inline constexpr std::array<Cell, 4> kNeighborOffsets{
    Cell{0, -1}, Cell{-1, 0}, Cell{1, 0}, Cell{0, 1}};

constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }

constexpr int manhattan(Cell a, Cell b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) +
         (a.y > b.y ? a.y - b.y : b.y - a.y);
}

constexpr bool adjacent(Cell a, Cell b) { return manhattan(a, b) == 1; }

class GridMap {
public:
  GridMap() = default;
  GridMap(int width, int height);
  GridMap(int width, int height, std::span<const Cell> obstacles);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t cell_count() const noexcept { return blocked_.size(); }

  bool in_bounds(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  // Cells outside the rectangle count as obstacles.
  bool is_obstacle(Cell c) const noexcept {
    return !in_bounds(c) || blocked_[index(c)] != 0;
  }
  bool is_free(Cell c) const noexcept { return !is_obstacle(c); }

  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t index) const noexcept {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  void set_obstacle(Cell c, bool blocked = true);

  /// Obstacle cells in row-major order.
  std::vector<Cell> obstacles() const;
  std::size_t obstacle_count() const noexcept;

  friend bool operator==(const GridMap &, const GridMap &) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> blocked_;
};

/// A set of tile cells kept in canonical row-major order. Construction only
/// canonicalizes; validate() checks the polyomino invariants against a map.
class Configuration {
public:
  Configuration() = default;
  explicit Configuration(std::vector<Cell> tiles);
  Configuration(std::initializer_list<Cell> tiles)
      : Configuration(std::vector<Cell>(tiles)) {}

  std::span<const Cell> tiles() const noexcept { return tiles_; }
  std::size_t size() const noexcept { return tiles_.size(); }
  bool empty() const noexcept { return tiles_.empty(); }
  bool contains(Cell c) const noexcept;
  std::uint64_t hash() const noexcept { return hash_; }

  auto begin() const noexcept { return tiles_.begin(); }
  auto end() const noexcept { return tiles_.end(); }

  /// Copy with one tile moved; `from` must be present and `to` absent.
  Configuration moved(Cell from, Cell to) const;

  friend bool operator==(const Configuration &a, const Configuration &b) {
    return a.hash_ == b.hash_ && a.tiles_ == b.tiles_;
  }

private:
  std::vector<Cell> tiles_;
  std::uint64_t hash_ = 0;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration &c) const noexcept {
    return static_cast<std::size_t>(c.hash());
  }
};

/// Throws PlanningError(invalid_configuration) unless the configuration is
/// nonempty, in bounds, obstacle-free and 4-connected.
void validate(const GridMap &map, const Configuration &config);

/// BFS distances on an axis-aligned window of the grid.
class DistanceField {
public:
  static constexpr int kUnreachable = -1;

  DistanceField() = default;
  DistanceField(Cell origin, int width, int height);

  int at(Cell c) const noexcept;
  bool reachable(Cell c) const noexcept { return at(c) != kUnreachable; }

  Cell origin() const noexcept { return origin_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  // Used by the BFS routines while filling the field.
  bool contains(Cell c) const noexcept {
    return c.x >= origin_.x && c.y >= origin_.y && c.x < origin_.x + width_ &&
           c.y < origin_.y + height_;
  }
  int &slot(Cell c) noexcept { return dist_[offset(c)]; }

private:
  std::size_t offset(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y - origin_.y) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x - origin_.x);
  }

  Cell origin_{};
  int width_ = 0;
  int height_ = 0;
  std::vector<int> dist_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

bool is_connected(std::span<const Cell> tiles);

/// Tiles whose removal leaves the rest connected (non articulation points).
/// A singleton configuration returns its single tile.
std::vector<Cell> leaf_tiles(const Configuration &config);

/// Multi-source BFS over the obstacle-free cells of the map.
DistanceField bfs_free(const GridMap &map, std::span<const Cell> sources);
DistanceField bfs_free(const GridMap &map, Cell source);

/// BFS restricted to the given tiles.
DistanceField bfs_on_tiles(std::span<const Cell> tiles, Cell source);

std::size_t overlap(const Configuration &a, const Configuration &b);

Point2 center_of_mass(const Configuration &config);

/// 4-connected components, each in row-major order, listed by their first
/// cell.
std::vector<std::vector<Cell>> connected_components(std::span<const Cell> tiles);

/// Largest component of a ∩ b; ties go to the component holding the smallest
/// row-major cell.
std::vector<Cell> largest_overlap_component(const Configuration &s,
                                            const Configuration &g);

/// Free cells 4-adjacent to the configuration, row-major.
std::vector<Cell> free_neighbors(const GridMap &map,
                                 const Configuration &config);

/// True when both configurations lie in one free-space component.
bool same_free_component(const GridMap &map, const Configuration &a,
                         const Configuration &b);

/// Copy of the map with every cell outside the free component containing
/// `seed` turned into an obstacle.
GridMap restrict_to_component(const GridMap &map, Cell seed);

} // namespace polyreconf
