#include "polyreconf/grid.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace polyreconf {

const char *to_string(Errc code) noexcept {
  switch (code) {
  case Errc::source_on_obstacle: return "SourceOnObstacle";
  case Errc::source_not_on_tiles: return "SourceNotOnTiles";
  case Errc::size_mismatch: return "SizeMismatch";
  case Errc::infeasible: return "Infeasible";
  case Errc::illegal_pickup: return "IllegalPickup";
  case Errc::illegal_placement: return "IllegalPlacement";
  case Errc::disconnected_result: return "DisconnectedResult";
  case Errc::no_move_found: return "NoMoveFound";
  case Errc::budget_exceeded: return "BudgetExceeded";
  case Errc::separate_components: return "SeparateComponents";
  case Errc::broken_chain: return "BrokenChain";
  case Errc::no_room: return "NoRoom";
  case Errc::too_small: return "TooSmall";
  case Errc::invalid_params: return "InvalidParams";
  case Errc::invalid_configuration: return "InvalidConfiguration";
  case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

// --- GridMap ---------------------------------------------------------------

GridMap::GridMap(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw PlanningError(Errc::invalid_params, "map dimensions must be positive");
  blocked_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

GridMap::GridMap(int width, int height, std::span<const Cell> obstacles)
    : GridMap(width, height) {
  for (Cell c : obstacles) {
    if (!in_bounds(c))
      throw PlanningError(Errc::invalid_params, "obstacle out of bounds");
    blocked_[index(c)] = 1;
  }
}

void GridMap::set_obstacle(Cell c, bool blocked) {
  if (!in_bounds(c))
    throw PlanningError(Errc::invalid_params, "obstacle out of bounds");
  blocked_[index(c)] = blocked ? 1 : 0;
}

std::vector<Cell> GridMap::obstacles() const {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < blocked_.size(); ++i)
    if (blocked_[i])
      out.push_back(cell_at(i));
  return out;
}

std::size_t GridMap::obstacle_count() const noexcept {
  return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), 1));
}

// --- Configuration ---------------------------------------------------------

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  return h;
}

std::uint64_t hash_tiles(const std::vector<Cell> &tiles) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ tiles.size();
  for (Cell c : tiles)
    h = mix(h, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.y)) << 32) |
                   static_cast<std::uint32_t>(c.x));
  return h;
}

// Dense lookup from cell to position in a tile list, over the tiles' bounding
// box (optionally grown to include extra cells).
class TileIndex {
public:
  explicit TileIndex(std::span<const Cell> tiles, std::span<const Cell> extra = {}) {
    if (tiles.empty() && extra.empty())
      return;
    int x0 = std::numeric_limits<int>::max(), y0 = x0;
    int x1 = std::numeric_limits<int>::min(), y1 = x1;
    auto grow = [&](Cell c) {
      x0 = std::min(x0, c.x);
      y0 = std::min(y0, c.y);
      x1 = std::max(x1, c.x);
      y1 = std::max(y1, c.y);
    };
    for (Cell c : tiles) grow(c);
    for (Cell c : extra) grow(c);
    origin_ = {x0, y0};
    width_ = x1 - x0 + 1;
    height_ = y1 - y0 + 1;
    slots_.assign(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), -1);
    for (std::size_t i = 0; i < tiles.size(); ++i)
      slots_[offset(tiles[i])] = static_cast<int>(i);
  }

  int find(Cell c) const noexcept {
    if (c.x < origin_.x || c.y < origin_.y || c.x >= origin_.x + width_ ||
        c.y >= origin_.y + height_)
      return -1;
    return slots_[offset(c)];
  }

  Cell origin() const noexcept { return origin_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

private:
  std::size_t offset(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y - origin_.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x - origin_.x);
  }

  Cell origin_{};
  int width_ = 0;
  int height_ = 0;
  std::vector<int> slots_;
};

} // namespace

Configuration::Configuration(std::vector<Cell> tiles) : tiles_(std::move(tiles)) {
  std::sort(tiles_.begin(), tiles_.end());
  tiles_.erase(std::unique(tiles_.begin(), tiles_.end()), tiles_.end());
  hash_ = hash_tiles(tiles_);
}

bool Configuration::contains(Cell c) const noexcept {
  return std::binary_search(tiles_.begin(), tiles_.end(), c);
}

Configuration Configuration::moved(Cell from, Cell to) const {
  std::vector<Cell> next;
  next.reserve(tiles_.size());
  for (Cell c : tiles_)
    if (c != from)
      next.push_back(c);
  next.push_back(to);
  return Configuration(std::move(next));
}

void validate(const GridMap &map, const Configuration &config) {
  if (config.empty())
    throw PlanningError(Errc::invalid_configuration, "configuration is empty");
  for (Cell c : config)
    if (map.is_obstacle(c))
      throw PlanningError(Errc::invalid_configuration,
                          "tile (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                              ") is out of bounds or on an obstacle");
  if (!is_connected(config.tiles()))
    throw PlanningError(Errc::invalid_configuration, "configuration is not connected");
}

// --- DistanceField ---------------------------------------------------------

DistanceField::DistanceField(Cell origin, int width, int height)
    : origin_(origin), width_(width), height_(height),
      dist_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), kUnreachable) {}

int DistanceField::at(Cell c) const noexcept {
  if (!contains(c))
    return kUnreachable;
  return dist_[offset(c)];
}

// --- connectivity ----------------------------------------------------------

std::vector<std::vector<Cell>> connected_components(std::span<const Cell> tiles) {
  std::vector<Cell> sorted(tiles.begin(), tiles.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<std::vector<Cell>> components;
  if (sorted.empty())
    return components;
  TileIndex index(sorted);
  std::vector<char> seen(sorted.size(), 0);
  std::vector<int> stack;
  for (std::size_t start = 0; start < sorted.size(); ++start) {
    if (seen[start])
      continue;
    std::vector<Cell> component;
    seen[start] = 1;
    stack.push_back(static_cast<int>(start));
    while (!stack.empty()) {
      Cell c = sorted[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      component.push_back(c);
      for (Cell d : kNeighborOffsets) {
        int j = index.find(c + d);
        if (j >= 0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          stack.push_back(j);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

bool is_connected(std::span<const Cell> tiles) {
  return connected_components(tiles).size() <= 1;
}

std::vector<Cell> leaf_tiles(const Configuration &config) {
  const auto tiles = config.tiles();
  const std::size_t n = tiles.size();
  if (n <= 1)
    return {tiles.begin(), tiles.end()};

  // Iterative Tarjan articulation-point search from tile 0.
  TileIndex index(tiles);
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), child_count(n, 0);
  std::vector<char> cut(n, 0);
  struct Frame {
    int v;
    int next_dir;
  };
  std::vector<Frame> stack;
  int timer = 0;
  disc[0] = low[0] = timer++;
  stack.push_back({0, 0});
  while (!stack.empty()) {
    Frame &f = stack.back();
    const int v = f.v;
    if (f.next_dir < 4) {
      Cell nb = tiles[static_cast<std::size_t>(v)] + kNeighborOffsets[static_cast<std::size_t>(f.next_dir)];
      ++f.next_dir;
      int w = index.find(nb);
      if (w < 0)
        continue;
      auto uw = static_cast<std::size_t>(w);
      auto uv = static_cast<std::size_t>(v);
      if (disc[uw] < 0) {
        parent[uw] = v;
        ++child_count[uv];
        disc[uw] = low[uw] = timer++;
        stack.push_back({w, 0});
      } else if (w != parent[uv]) {
        low[uv] = std::min(low[uv], disc[uw]);
      }
      continue;
    }
    stack.pop_back();
    const int p = parent[static_cast<std::size_t>(v)];
    if (p >= 0) {
      auto up = static_cast<std::size_t>(p);
      low[up] = std::min(low[up], low[static_cast<std::size_t>(v)]);
      if (parent[up] >= 0 && low[static_cast<std::size_t>(v)] >= disc[up])
        cut[up] = 1;
    }
  }
  if (child_count[0] > 1)
    cut[0] = 1;

  std::vector<Cell> leaves;
  for (std::size_t i = 0; i < n; ++i)
    if (!cut[i] && disc[i] >= 0)
      leaves.push_back(tiles[i]);
  return leaves;
}

// --- BFS -------------------------------------------------------------------

DistanceField bfs_free(const GridMap &map, std::span<const Cell> sources) {
  DistanceField field({0, 0}, map.width(), map.height());
  std::queue<Cell> frontier;
  for (Cell s : sources) {
    if (map.is_obstacle(s))
      throw PlanningError(Errc::source_on_obstacle,
                          "BFS source (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                              ") is not a free cell");
    if (field.slot(s) != 0) {
      field.slot(s) = 0;
      frontier.push(s);
    }
  }
  while (!frontier.empty()) {
    Cell c = frontier.front();
    frontier.pop();
    const int next = field.at(c) + 1;
    for (Cell d : kNeighborOffsets) {
      Cell nb = c + d;
      if (map.is_free(nb) && field.slot(nb) == DistanceField::kUnreachable) {
        field.slot(nb) = next;
        frontier.push(nb);
      }
    }
  }
  return field;
}

DistanceField bfs_free(const GridMap &map, Cell source) {
  return bfs_free(map, std::span<const Cell>(&source, 1));
}

DistanceField bfs_on_tiles(std::span<const Cell> tiles, Cell source) {
  TileIndex index(tiles);
  if (index.find(source) < 0)
    throw PlanningError(Errc::source_not_on_tiles, "BFS source is not a tile");
  DistanceField field(index.origin(), index.width(), index.height());
  std::queue<Cell> frontier;
  field.slot(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    Cell c = frontier.front();
    frontier.pop();
    const int next = field.at(c) + 1;
    for (Cell d : kNeighborOffsets) {
      Cell nb = c + d;
      if (index.find(nb) >= 0 && field.slot(nb) == DistanceField::kUnreachable) {
        field.slot(nb) = next;
        frontier.push(nb);
      }
    }
  }
  return field;
}

// --- set measures ----------------------------------------------------------

std::size_t overlap(const Configuration &a, const Configuration &b) {
  std::size_t count = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

Point2 center_of_mass(const Configuration &config) {
  Point2 sum;
  for (Cell c : config) {
    sum.x += c.x;
    sum.y += c.y;
  }
  const auto n = static_cast<double>(config.size());
  return {sum.x / n, sum.y / n};
}

std::vector<Cell> largest_overlap_component(const Configuration &s, const Configuration &g) {
  std::vector<Cell> shared;
  std::set_intersection(s.begin(), s.end(), g.begin(), g.end(), std::back_inserter(shared));
  auto components = connected_components(shared);
  std::vector<Cell> best;
  // Components arrive ordered by their smallest cell, so the first of maximal
  // size wins ties.
  for (auto &comp : components)
    if (comp.size() > best.size())
      best = std::move(comp);
  return best;
}

std::vector<Cell> free_neighbors(const GridMap &map, const Configuration &config) {
  std::vector<Cell> out;
  for (Cell c : config)
    for (Cell d : kNeighborOffsets) {
      Cell nb = c + d;
      if (map.is_free(nb) && !config.contains(nb))
        out.push_back(nb);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool same_free_component(const GridMap &map, const Configuration &a, const Configuration &b) {
  if (a.empty() || b.empty())
    return false;
  const auto field = bfs_free(map, *a.begin());
  for (Cell c : a)
    if (!field.reachable(c))
      return false;
  for (Cell c : b)
    if (!field.reachable(c))
      return false;
  return true;
}

GridMap restrict_to_component(const GridMap &map, Cell seed) {
  const auto field = bfs_free(map, seed);
  GridMap out(map.width(), map.height());
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    Cell c = map.cell_at(i);
    if (!field.reachable(c))
      out.set_obstacle(c);
  }
  return out;
}

} // namespace polyreconf
