#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyreconf/map_io.hpp"
#include "support.hpp"

using namespace polyreconf;

namespace {

Configuration cfg(std::initializer_list<Cell> cells) { return Configuration(cells); }

std::set<Cell> leaf_set(const Configuration &c) {
  const auto v = leaf_tiles(c);
  return {v.begin(), v.end()};
}

} // namespace

TEST_CASE("is_connected on small sets") {
  const std::vector<Cell> line{{0, 0}, {1, 0}, {2, 0}};
  const std::vector<Cell> gap{{0, 0}, {2, 0}};
  const std::vector<Cell> diagonal{{0, 0}, {1, 1}};
  CHECK(is_connected(line));
  CHECK_FALSE(is_connected(gap));
  CHECK_FALSE(is_connected(diagonal));
  CHECK(is_connected(std::vector<Cell>{}));
  CHECK(is_connected(std::vector<Cell>{{4, 4}}));
}

TEST_CASE("leaf tiles of small shapes") {
  CHECK(leaf_set(cfg({{0, 0}, {1, 0}, {2, 0}})) == std::set<Cell>{{0, 0}, {2, 0}});
  const auto square = cfg({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK(leaf_set(square) == oracle::leaves(square));
  CHECK(leaf_set(square).size() == 4);
  CHECK(leaf_set(cfg({{0, 0}})) == std::set<Cell>{{0, 0}});
}

TEST_CASE("leaf tiles match brute-force removal on random polyominoes") {
  std::mt19937_64 rng(11);
  const GridMap map(8, 8);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const auto c = oracle::random_polyomino(map, n, rng);
    REQUIRE(c);
    CHECK(leaf_set(*c) == oracle::leaves(*c));
  }
}

TEST_CASE("polyominoes with two or more tiles have at least two leaves") {
  std::mt19937_64 rng(12);
  const GridMap map(12, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 19;
    const auto c = oracle::random_polyomino(map, n, rng);
    REQUIRE(c);
    CHECK(leaf_tiles(*c).size() >= 2);
  }
}

TEST_CASE("bfs_free examples") {
  const GridMap empty(5, 5);
  CHECK(bfs_free(empty, Cell{0, 0}).at({4, 4}) == 8);

  GridMap wall(5, 5);
  for (int y = 0; y <= 3; ++y)
    wall.set_obstacle({2, y});
  CHECK(bfs_free(wall, Cell{0, 0}).at({4, 0}) == 12);
  CHECK(oracle::free_distance(wall, {0, 0}, {4, 0}) == 12);

  GridMap boxed(5, 5);
  for (Cell c : {Cell{1, 0}, Cell{0, 1}})
    boxed.set_obstacle(c);
  const auto field = bfs_free(boxed, Cell{0, 0});
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x)
      if (Cell{x, y} != Cell{0, 0} && boxed.is_free({x, y}))
        CHECK_FALSE(field.reachable({x, y}));

  CHECK_THROWS_AS(bfs_free(wall, Cell{2, 0}), PlanningError);
}

TEST_CASE("bfs_free agrees with relaxation and is symmetric") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const GridMap map = oracle::random_obstacles(9, 7, 0.3, rng);
    const auto free = oracle::free_cells(map);
    if (free.size() < 2)
      continue;
    std::vector<Cell> pool(free.begin(), free.end());
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const Cell a = pool[pick(rng)], b = pool[pick(rng)];
    const auto truth = oracle::relax(free, a);
    const auto field = bfs_free(map, a);
    for (Cell c : free) {
      auto it = truth.find(c);
      CHECK(field.at(c) == (it == truth.end() ? DistanceField::kUnreachable : it->second));
    }
    CHECK(bfs_free(map, a).at(b) == bfs_free(map, b).at(a));
  }
}

TEST_CASE("multi-source bfs_free is the minimum over sources") {
  std::mt19937_64 rng(14);
  const GridMap map = oracle::random_obstacles(10, 10, 0.2, rng);
  const auto free = oracle::free_cells(map);
  std::vector<Cell> pool(free.begin(), free.end());
  const std::vector<Cell> sources{pool.front(), pool[pool.size() / 2], pool.back()};
  const auto field = bfs_free(map, sources);
  for (Cell c : free) {
    int best = DistanceField::kUnreachable;
    for (Cell s : sources) {
      const int d = bfs_free(map, s).at(c);
      if (d >= 0 && (best < 0 || d < best))
        best = d;
    }
    CHECK(field.at(c) == best);
  }
}

TEST_CASE("bfs_on_tiles examples") {
  const std::vector<Cell> l{{0, 0}, {0, 1}, {1, 1}};
  CHECK(bfs_on_tiles(l, {0, 0}).at({1, 1}) == 2);

  std::vector<Cell> row;
  for (int x = 0; x < 9; ++x)
    row.push_back({x, 0});
  CHECK(bfs_on_tiles(row, {0, 0}).at({8, 0}) == 8);

  std::vector<Cell> ring;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x)
      if (Cell{x, y} != Cell{1, 1})
        ring.push_back({x, y});
  CHECK(bfs_on_tiles(ring, {0, 0}).at({2, 2}) == 4);
  CHECK(oracle::relax({ring.begin(), ring.end()}, {0, 0}).at({2, 2}) == 4);
  CHECK_FALSE(bfs_on_tiles(ring, {0, 0}).reachable({1, 1}));

  CHECK_THROWS_AS(bfs_on_tiles(ring, {1, 1}), PlanningError);
}

TEST_CASE("bfs_on_tiles matches relaxation and the Manhattan lower bound") {
  std::mt19937_64 rng(15);
  const GridMap map(10, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = *oracle::random_polyomino(map, 3 + trial % 15, rng);
    const Cell source = c.tiles()[trial % c.size()];
    const auto truth = oracle::relax(oracle::as_set(c), source);
    const auto field = bfs_on_tiles(c.tiles(), source);
    for (Cell t : c) {
      CHECK(field.at(t) == truth.at(t));
      CHECK(field.at(t) >= manhattan(source, t));
    }
  }
}

TEST_CASE("overlap") {
  std::vector<Cell> cells;
  for (int x = 0; x < 15; ++x)
    cells.push_back({x, 0});
  const Configuration a(cells);
  CHECK(overlap(a, a) == 15);
  CHECK(overlap(a, cfg({{0, 5}, {1, 5}})) == 0);
  const auto b = cfg({{0, 0}, {1, 0}}), c = cfg({{1, 0}, {2, 0}});
  CHECK(overlap(b, c) == 1);
  CHECK(overlap(c, b) == 1);
}

TEST_CASE("center of mass") {
  auto com = center_of_mass(cfg({{0, 0}, {2, 0}}));
  CHECK(com.x == 1.0);
  CHECK(com.y == 0.0);
  com = center_of_mass(cfg({{0, 0}}));
  CHECK(com.x == 0.0);
  CHECK(com.y == 0.0);
  com = center_of_mass(cfg({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  CHECK(com.x == 0.5);
  CHECK(com.y == 0.5);
}

TEST_CASE("largest overlap component") {
  const auto s = cfg({{0, 0}, {1, 0}, {5, 5}, {9, 9}});
  const auto g = cfg({{0, 0}, {1, 0}, {5, 5}, {7, 7}});
  CHECK(largest_overlap_component(s, g) == std::vector<Cell>{{0, 0}, {1, 0}});
  CHECK(largest_overlap_component(cfg({{0, 0}}), cfg({{1, 1}})).empty());

  const auto tie_s = cfg({{0, 0}, {3, 3}});
  const auto tie_g = cfg({{3, 3}, {0, 0}});
  CHECK(largest_overlap_component(tie_s, tie_g) == std::vector<Cell>{{0, 0}});
  // Tie-break by enumeration: shuffle input order, answer must not change.
  std::vector<Cell> shuffled{{3, 3}, {0, 0}, {6, 1}};
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const Configuration both(shuffled);
    CHECK(largest_overlap_component(both, both) == std::vector<Cell>{{0, 0}});
  }
}

TEST_CASE("configuration canonical order and equality") {
  const auto a = cfg({{2, 1}, {0, 0}, {1, 0}});
  const auto b = cfg({{1, 0}, {2, 1}, {0, 0}});
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK(a.tiles()[0] == Cell{0, 0});
  CHECK(a.tiles()[2] == Cell{2, 1});
  CHECK(a.moved({2, 1}, {2, 0}) == cfg({{0, 0}, {1, 0}, {2, 0}}));
}

TEST_CASE("validate rejects broken configurations") {
  GridMap map(4, 4);
  map.set_obstacle({3, 3});
  CHECK_NOTHROW(validate(map, cfg({{0, 0}, {1, 0}})));
  CHECK_THROWS_AS(validate(map, cfg({{0, 0}, {2, 0}})), PlanningError);
  CHECK_THROWS_AS(validate(map, cfg({{3, 3}})), PlanningError);
  CHECK_THROWS_AS(validate(map, cfg({{4, 0}})), PlanningError);
  CHECK_THROWS_AS(validate(map, Configuration{}), PlanningError);
}

TEST_CASE("out-of-bounds cells are obstacles") {
  const GridMap map(3, 3);
  CHECK(map.is_obstacle({-1, 0}));
  CHECK(map.is_obstacle({3, 0}));
  CHECK(map.is_free({2, 2}));
}

TEST_CASE("map text round trip is byte identical") {
  const std::string text = "6 4\n"
                           "S.#...\n"
                           "SB#.G.\n"
                           "..#.G.\n"
                           "......\n";
  const MapInstance inst = parse_map(text);
  CHECK(inst.map.width() == 6);
  CHECK(inst.map.height() == 4);
  CHECK(inst.map.obstacle_count() == 3);
  CHECK(inst.start == cfg({{0, 0}, {0, 1}, {1, 1}}));
  CHECK(inst.goal == cfg({{1, 1}, {4, 1}, {4, 2}}));
  CHECK(serialize_map(inst) == text);
}

TEST_CASE("map round trip on random maps") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    GridMap map = oracle::random_obstacles(7 + trial % 5, 5 + trial % 3, 0.25, rng);
    const auto s = oracle::random_polyomino(map, 4, rng);
    const auto g = oracle::random_polyomino(map, 4, rng);
    if (!s || !g)
      continue;
    const MapInstance inst{map, *s, *g};
    const std::string text = serialize_map(inst);
    const MapInstance back = parse_map(text);
    CHECK(back.map == inst.map);
    CHECK(back.start == inst.start);
    CHECK(back.goal == inst.goal);
    CHECK(serialize_map(back) == text);
  }
}

TEST_CASE("map parser reports line and column") {
  try {
    parse_map("3 2\n...\n.X.\n");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 2);
  }
  try {
    parse_map("3 2\n...\n..\n");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_map("3\n...\n"), ParseError);
  CHECK_THROWS_AS(parse_map("2 2\n..\n"), ParseError);
  CHECK_NOTHROW(parse_map("2 1\r\n.S\r\n\n"));
}
