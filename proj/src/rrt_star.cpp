#include "polyreconf/rrt_star.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

namespace polyreconf {

void PlannerParams::validate() const {
  if (!(bias_base >= 0.0 && bias_base <= bias_max && bias_max <= 1.0))
    throw PlanningError(Errc::invalid_params, "require 0 <= bias_base <= bias_max <= 1");
  if (rad < 1)
    throw PlanningError(Errc::invalid_params, "rad must be at least 1");
  if (max_nodes < 1)
    throw PlanningError(Errc::invalid_params, "max_nodes must be at least 1");
  if (checkpoint_interval < 1)
    throw PlanningError(Errc::invalid_params, "checkpoint_interval must be at least 1");
  if (time_limit_seconds && !(*time_limit_seconds > 0.0))
    throw PlanningError(Errc::invalid_params, "time limit must be positive");
}

// --- Tree ------------------------------------------------------------------

Tree::Tree(const GridMap &map, Configuration root, Configuration goal)
    : width_(map.width()), words_((map.cell_count() + 63) / 64), goal_(std::move(goal)) {
  insert(Candidate{kNoParent, std::move(root), {}, 0, RobotState{}});
}

std::optional<NodeId> Tree::find(const Configuration &config) const {
  auto it = index_.find(config);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<NodeId> Tree::goal_node() const { return find(goal_); }

double Tree::mean_goal_overlap() const noexcept {
  return static_cast<double>(overlap_sum_) / static_cast<double>(nodes_.size());
}

std::vector<std::uint64_t> Tree::bitset_of(const Configuration &config) const {
  std::vector<std::uint64_t> bits(words_, 0);
  for (Cell c : config) {
    const auto i = static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(c.x);
    bits[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return bits;
}

std::size_t Tree::overlap_with(NodeId id, std::span<const std::uint64_t> bits) const {
  const std::uint64_t *mine = bits_.data() + id * words_;
  std::size_t count = 0;
  for (std::size_t w = 0; w < words_; ++w)
    count += static_cast<std::size_t>(std::popcount(mine[w] & bits[w]));
  return count;
}

NodeId Tree::insert(Candidate candidate) {
  const NodeId id = nodes_.size();
  TreeNode node;
  node.id = id;
  node.parent = candidate.parent;
  node.moves = std::move(candidate.moves);
  node.cost_from_root = candidate.cost_from_root;
  node.robot = candidate.robot;
  node.goal_overlap = overlap(candidate.config, goal_);
  node.com = center_of_mass(candidate.config);
  node.config = std::move(candidate.config);

  const auto bits = bitset_of(node.config);
  bits_.insert(bits_.end(), bits.begin(), bits.end());
  index_.emplace(node.config, id);
  overlap_sum_ += node.goal_overlap;
  if (node.parent != kNoParent)
    nodes_.at(node.parent).children.push_back(id);
  nodes_.push_back(std::move(node));
  return id;
}

void Tree::reparent(NodeId id, NodeId parent, std::vector<Dropoff> moves, std::int64_t cost,
                    RobotState robot) {
  TreeNode &node = nodes_.at(id);
  if (node.parent != kNoParent) {
    auto &siblings = nodes_.at(node.parent).children;
    siblings.erase(std::remove(siblings.begin(), siblings.end(), id), siblings.end());
  }
  node.parent = parent;
  node.moves = std::move(moves);
  node.cost_from_root = cost;
  node.robot = robot;
  nodes_.at(parent).children.push_back(id);
  touched_.push_back(id);
}

void Tree::set_chain_costs(NodeId id, std::vector<Dropoff> moves, std::int64_t cost) {
  TreeNode &node = nodes_.at(id);
  node.moves = std::move(moves);
  node.cost_from_root = cost;
  touched_.push_back(id);
}

bool Tree::is_ancestor(NodeId ancestor, NodeId id) const {
  for (NodeId cur = id; cur != kNoParent; cur = nodes_.at(cur).parent)
    if (cur == ancestor)
      return true;
  return false;
}

std::vector<NodeId> Tree::path_to(NodeId id) const {
  std::vector<NodeId> path;
  for (NodeId cur = id; cur != kNoParent; cur = nodes_.at(cur).parent)
    path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<NodeId> Tree::take_touched() { return std::exchange(touched_, {}); }

// --- heuristic and bias ----------------------------------------------------

namespace {

double com_distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double similarity(std::size_t shared, double distance) {
  return (static_cast<double>(shared) + 1.0) / std::max(distance, 0.1);
}

} // namespace

double heuristic(const Configuration &a, const Configuration &b) {
  return similarity(overlap(a, b), com_distance(center_of_mass(a), center_of_mass(b)));
}

double dynamic_bias(const Tree &tree, const PlannerParams &params) {
  const auto n = static_cast<double>(tree.goal().size());
  return params.bias_base + (params.bias_max - params.bias_base) * (tree.mean_goal_overlap() / n);
}

// --- sampling --------------------------------------------------------------

Configuration sample_random_config(const GridMap &map, std::size_t n, std::mt19937_64 &rng) {
  if (n == 0)
    throw PlanningError(Errc::invalid_params, "cannot sample an empty configuration");

  // Seeds are drawn only from free components that can hold n tiles.
  std::vector<int> label(map.cell_count(), -1);
  std::vector<std::size_t> component_size;
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    if (label[i] >= 0 || map.is_obstacle(map.cell_at(i)))
      continue;
    const int id = static_cast<int>(component_size.size());
    std::size_t size = 0;
    std::vector<std::size_t> stack{i};
    label[i] = id;
    while (!stack.empty()) {
      const Cell c = map.cell_at(stack.back());
      stack.pop_back();
      ++size;
      for (Cell d : kNeighborOffsets) {
        const Cell nb = c + d;
        if (map.is_free(nb) && label[map.index(nb)] < 0) {
          label[map.index(nb)] = id;
          stack.push_back(map.index(nb));
        }
      }
    }
    component_size.push_back(size);
  }
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < map.cell_count(); ++i)
    if (label[i] >= 0 && component_size[static_cast<std::size_t>(label[i])] >= n)
      seeds.push_back(i);
  if (seeds.empty())
    throw PlanningError(Errc::no_room, "no free component holds " + std::to_string(n) + " tiles");

  std::vector<char> state(map.cell_count(), 0); // 1 = frontier, 2 = tile
  std::vector<Cell> tiles;
  std::vector<Cell> frontier;
  auto add_tile = [&](Cell c) {
    state[map.index(c)] = 2;
    tiles.push_back(c);
    for (Cell d : kNeighborOffsets) {
      const Cell nb = c + d;
      if (map.is_free(nb) && state[map.index(nb)] == 0) {
        state[map.index(nb)] = 1;
        frontier.push_back(nb);
      }
    }
  };
  add_tile(map.cell_at(seeds[std::uniform_int_distribution<std::size_t>(0, seeds.size() - 1)(rng)]));
  while (tiles.size() < n) {
    const std::size_t pick =
        std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng);
    const Cell next = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    add_tile(next);
  }
  return Configuration(std::move(tiles));
}

// --- tree operations -------------------------------------------------------

std::optional<NodeId> nearest_node(const Tree &tree, const Configuration &q,
                                   bool exclude_extended_to_goal) {
  const auto bits = tree.bitset_of(q);
  const Point2 com = center_of_mass(q);
  std::optional<NodeId> best;
  double best_h = -1.0;
  for (const TreeNode &node : tree.nodes()) {
    if (exclude_extended_to_goal && node.extended_toward_goal)
      continue;
    const double h = similarity(tree.overlap_with(node.id, bits), com_distance(node.com, com));
    if (h > best_h) {
      best_h = h;
      best = node.id;
    }
  }
  return best;
}

namespace {

std::optional<Connection> run_local_planner(const Configuration &start, RobotState robot,
                                            const Configuration &target, const GridMap &map,
                                            std::size_t rad, LocalPlanner planner) {
  Connection chain;
  Configuration current = start;
  for (std::size_t i = 0; i < rad && current != target; ++i) {
    StepOutcome outcome;
    try {
      outcome = local_step(planner, current, target, map);
    } catch (const PlanningError &e) {
      if (e.code() == Errc::separate_components)
        break;
      throw;
    }
    if (outcome.status != StepStatus::moved)
      break;
    auto applied = apply_dropoff(current, robot, outcome.dropoff, map);
    chain.cost += applied.dropoff.cost();
    chain.moves.push_back(applied.dropoff);
    current = std::move(applied.after);
    robot = applied.robot;
  }
  if (chain.moves.empty())
    return std::nullopt;
  chain.robot = robot;
  return chain;
}

Connection replay_chain(const TreeNode &parent, std::span<const Dropoff> moves,
                        const GridMap &map) {
  Connection chain;
  Configuration current = parent.config;
  RobotState robot = parent.robot;
  for (const Dropoff &move : moves) {
    auto applied = apply_dropoff(current, robot, move, map);
    chain.cost += applied.dropoff.cost();
    chain.moves.push_back(applied.dropoff);
    current = std::move(applied.after);
    robot = applied.robot;
  }
  chain.robot = robot;
  return chain;
}

// The robot position left by a parent changes the first pickup distance of
// each child chain; grandchildren are not revisited.
void refresh_children(Tree &tree, NodeId id, const GridMap &map) {
  const TreeNode &node = tree.node(id);
  const std::vector<NodeId> children = node.children;
  for (NodeId child : children) {
    auto chain = replay_chain(tree.node(id), tree.node(child).moves, map);
    tree.set_chain_costs(child, std::move(chain.moves), tree.node(id).cost_from_root + chain.cost);
  }
}

} // namespace

std::optional<Candidate> extend(const Tree &tree, NodeId from, const Configuration &q,
                                const GridMap &map, const PlannerParams &params,
                                LocalPlanner planner) {
  const TreeNode &node = tree.node(from);
  auto chain = run_local_planner(node.config, node.robot, q, map, params.rad, planner);
  if (!chain)
    return std::nullopt;
  Configuration reached = node.config;
  for (const Dropoff &move : chain->moves)
    reached = reached.moved(move.source, move.target);
  return Candidate{from, std::move(reached), std::move(chain->moves),
                   node.cost_from_root + chain->cost, chain->robot};
}

std::optional<Connection> connect(const TreeNode &from, const Configuration &target,
                                  const GridMap &map, std::size_t rad, LocalPlanner planner) {
  if (from.config == target)
    return std::nullopt;
  auto chain = run_local_planner(from.config, from.robot, target, map, rad, planner);
  if (!chain)
    return std::nullopt;
  Configuration reached = from.config;
  for (const Dropoff &move : chain->moves)
    reached = reached.moved(move.source, move.target);
  if (reached != target)
    return std::nullopt;
  return chain;
}

InsertOutcome insert_or_update(Tree &tree, Candidate candidate, const GridMap &map) {
  const auto existing = tree.find(candidate.config);
  if (!existing)
    return {InsertResult::inserted, tree.insert(std::move(candidate))};

  const NodeId id = *existing;
  const TreeNode &node = tree.node(id);
  if (node.parent == kNoParent || candidate.cost_from_root >= node.cost_from_root ||
      tree.is_ancestor(id, candidate.parent))
    return {InsertResult::ignored, id};
  tree.reparent(id, candidate.parent, std::move(candidate.moves), candidate.cost_from_root,
                candidate.robot);
  refresh_children(tree, id, map);
  return {InsertResult::updated, id};
}

std::size_t rewire(Tree &tree, NodeId new_id, const GridMap &map, const PlannerParams &params,
                   LocalPlanner planner) {
  const std::size_t n = tree.goal().size();
  const auto bits = tree.bitset_of(tree.node(new_id).config);
  std::size_t changed = 0;

  // Lower bound on the cost of connecting two nodes: every differing tile
  // needs a dropoff, and a dropoff carries at least one cell.
  auto min_moves = [&](NodeId other) -> std::optional<std::int64_t> {
    const std::size_t shared = tree.overlap_with(other, bits);
    const std::size_t differing = n - shared;
    if (differing > params.rad)
      return std::nullopt;
    return static_cast<std::int64_t>(differing);
  };

  // Pass 1: cheapest parent for the new node.
  {
    const TreeNode &fresh = tree.node(new_id);
    NodeId best_parent = fresh.parent;
    std::int64_t best_cost = fresh.cost_from_root;
    std::optional<Connection> best_chain;
    for (NodeId k = 0; k < tree.size(); ++k) {
      if (k == new_id || k == fresh.parent)
        continue;
      const TreeNode &other = tree.node(k);
      if (other.cost_from_root + 1 >= best_cost)
        continue;
      const auto bound = min_moves(k);
      if (!bound || other.cost_from_root + *bound >= best_cost)
        continue;
      auto chain = connect(other, fresh.config, map, params.rad, planner);
      if (chain && other.cost_from_root + chain->cost < best_cost) {
        best_cost = other.cost_from_root + chain->cost;
        best_parent = k;
        best_chain = std::move(chain);
      }
    }
    if (best_chain) {
      tree.reparent(new_id, best_parent, std::move(best_chain->moves), best_cost,
                    best_chain->robot);
      ++changed;
    }
  }

  // Pass 2: nodes that get cheaper through the new node.
  for (NodeId k = 0; k < tree.size(); ++k) {
    if (k == new_id)
      continue;
    const TreeNode &fresh = tree.node(new_id);
    const TreeNode &other = tree.node(k);
    if (fresh.cost_from_root + 1 >= other.cost_from_root)
      continue;
    const auto bound = min_moves(k);
    if (!bound || fresh.cost_from_root + *bound >= other.cost_from_root)
      continue;
    if (tree.is_ancestor(k, new_id))
      continue;
    auto chain = connect(fresh, other.config, map, params.rad, planner);
    if (chain && fresh.cost_from_root + chain->cost < other.cost_from_root) {
      const std::int64_t cost = fresh.cost_from_root + chain->cost;
      tree.reparent(k, new_id, std::move(chain->moves), cost, chain->robot);
      refresh_children(tree, k, map);
      ++changed;
    }
  }
  return changed;
}

// --- planning loop ---------------------------------------------------------

namespace {

std::vector<Dropoff> path_moves(const Tree &tree, NodeId goal) {
  std::vector<Dropoff> moves;
  for (NodeId id : tree.path_to(goal)) {
    const auto &chain = tree.node(id).moves;
    moves.insert(moves.end(), chain.begin(), chain.end());
  }
  return moves;
}

} // namespace

PlanResult plan(const Configuration &s, const Configuration &g, const GridMap &map,
                const PlannerParams &params, LocalPlanner planner,
                std::span<const PlanStep> initial_solution) {
  params.validate();
  validate(map, s);
  validate(map, g);
  if (s.size() != g.size())
    throw PlanningError(Errc::size_mismatch, "start and goal differ in tile count");
  if (!same_free_component(map, s, g))
    throw PlanningError(Errc::separate_components,
                        "start and goal lie in different free-space components");

  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  const GridMap region = restrict_to_component(map, *s.begin());
  Tree tree(region, s, g);
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  PlanResult result;

  std::optional<std::int64_t> best_cost;
  std::vector<PlanStep> best_steps;
  std::vector<char> on_goal_path;

  auto evaluate_goal = [&] {
    const auto goal = tree.goal_node();
    if (!goal)
      return;
    const auto moves = path_moves(tree, *goal);
    auto steps = replay(s, moves, map);
    const std::int64_t cost = sequence_costs(steps).total;
    if (!result.nodes_to_first_solution)
      result.nodes_to_first_solution = tree.size();
    if (!best_cost || cost < *best_cost) {
      best_cost = cost;
      best_steps = std::move(steps);
    }
    on_goal_path.assign(tree.size(), 0);
    for (NodeId id : tree.path_to(*goal))
      on_goal_path[id] = 1;
  };

  std::size_t next_checkpoint = params.checkpoint_interval;
  auto record_checkpoints = [&] {
    while (tree.size() >= next_checkpoint) {
      result.curve.push_back({next_checkpoint, best_cost});
      next_checkpoint += params.checkpoint_interval;
    }
  };

  if (!initial_solution.empty()) {
    if (initial_solution.front().before != s || initial_solution.back().after != g)
      throw PlanningError(Errc::broken_chain, "initial solution does not connect start and goal");
    std::vector<Dropoff> moves;
    for (const auto &step : initial_solution)
      moves.push_back(step.dropoff);
    result.initial_solution_cost = sequence_costs(replay(s, moves, map)).total;
    NodeId parent = 0;
    for (std::size_t begin = 0; begin < moves.size(); begin += params.rad) {
      const std::size_t end = std::min(moves.size(), begin + params.rad);
      auto chain = replay_chain(tree.node(parent),
                                std::span<const Dropoff>(moves).subspan(begin, end - begin), map);
      Configuration reached = tree.node(parent).config;
      for (const Dropoff &move : chain.moves)
        reached = reached.moved(move.source, move.target);
      const std::int64_t cost = tree.node(parent).cost_from_root + chain.cost;
      parent = insert_or_update(tree, Candidate{parent, std::move(reached), std::move(chain.moves),
                                                cost, chain.robot},
                                map)
                   .id;
    }
    tree.take_touched();
    evaluate_goal();
  } else if (s == g) {
    evaluate_goal();
  }
  record_checkpoints();

  const std::size_t max_iterations =
      params.max_iterations != 0 ? params.max_iterations : 20 * params.max_nodes + 1000;
  const std::size_t n = s.size();
  while (s != g && tree.size() < params.max_nodes && result.iterations < max_iterations) {
    if (params.cost_threshold && best_cost && *best_cost <= *params.cost_threshold)
      break;
    if (params.time_limit_seconds &&
        std::chrono::duration<double>(Clock::now() - started).count() > *params.time_limit_seconds) {
      result.time_limit_hit = true;
      break;
    }
    ++result.iterations;

    std::optional<NodeId> dad;
    Configuration target;
    if (coin(rng) < dynamic_bias(tree, params)) {
      dad = nearest_node(tree, g, true);
      if (dad) {
        target = g;
        tree.mark_extended_toward_goal(*dad);
      }
    }
    if (!dad) {
      target = sample_random_config(region, n, rng);
      dad = nearest_node(tree, target, false);
    }

    auto candidate = extend(tree, *dad, target, region, params, planner);
    if (!candidate)
      continue;
    const auto outcome = insert_or_update(tree, std::move(*candidate), region);
    if (outcome.result == InsertResult::inserted)
      result.rewires += rewire(tree, outcome.id, region, params, planner);

    const auto touched = tree.take_touched();
    const bool goal_changed =
        (outcome.result != InsertResult::ignored && tree.node(outcome.id).config == g) ||
        std::any_of(touched.begin(), touched.end(), [&](NodeId id) {
          return id < on_goal_path.size() && on_goal_path[id];
        });
    if (goal_changed)
      evaluate_goal();
    record_checkpoints();
  }

  result.nodes_created = tree.size();
  if (result.curve.empty() || result.curve.back().nodes != tree.size())
    result.curve.push_back({tree.size(), best_cost});
  if (const auto goal = tree.goal_node()) {
    result.status = PlanStatus::found;
    result.steps = std::move(best_steps);
    result.costs = sequence_costs(result.steps);
    result.tree_goal_cost = tree.node(*goal).cost_from_root;
    result.tree_goal_replay_cost = sequence_costs(replay(s, path_moves(tree, *goal), map)).total;
  }
  return result;
}

} // namespace polyreconf
