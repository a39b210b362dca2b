#pragma once

// RRT* over polyomino configurations. Nodes are configurations, edges are
// chains of at most `rad` dropoffs produced by a local planner, and the edge
// cost is the travel time of the chain given the robot position left by the
// parent.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "polyreconf/grid.hpp"
#include "polyreconf/local_planners.hpp"

namespace polyreconf {

using NodeId = std::size_t;
inline constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();

struct PlannerParams {
  double bias_base = 0.1;
  double bias_max = 0.75;
  std::size_t rad = 1;
  std::size_t max_nodes = 10000;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> cost_threshold;
  std::size_t checkpoint_interval = 500;
  std::optional<double> time_limit_seconds;
  // Guards maps whose reachable configuration space is smaller than
  // max_nodes; 0 selects 20 * max_nodes + 1000.
  std::size_t max_iterations = 0;

  /// Throws invalid_params.
  void validate() const;
};

struct TreeNode {
  NodeId id = 0;
  Configuration config;
  NodeId parent = kNoParent;
  std::vector<Dropoff> moves; // chain from the parent's configuration
  std::int64_t cost_from_root = 0;
  RobotState robot;
  bool extended_toward_goal = false;
  std::size_t goal_overlap = 0;
  Point2 com;
  std::vector<NodeId> children;
};

/// A node proposed by extend(), not yet in the tree.
struct Candidate {
  NodeId parent = kNoParent;
  Configuration config;
  std::vector<Dropoff> moves;
  std::int64_t cost_from_root = 0;
  RobotState robot;
};

class Tree {
public:
  Tree(const GridMap &map, Configuration root, Configuration goal);

  std::size_t size() const noexcept { return nodes_.size(); }
  const TreeNode &node(NodeId id) const { return nodes_.at(id); }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  const Configuration &goal() const noexcept { return goal_; }

  std::optional<NodeId> find(const Configuration &config) const;
  std::optional<NodeId> goal_node() const;

  /// Mean overlap of all node configurations with the goal.
  double mean_goal_overlap() const noexcept;

  /// Tiles shared by a node and a configuration given as a cell bitset.
  std::size_t overlap_with(NodeId id, std::span<const std::uint64_t> bits) const;
  std::vector<std::uint64_t> bitset_of(const Configuration &config) const;

  NodeId insert(Candidate candidate);
  void reparent(NodeId id, NodeId parent, std::vector<Dropoff> moves, std::int64_t cost,
                RobotState robot);
  void set_chain_costs(NodeId id, std::vector<Dropoff> moves, std::int64_t cost);
  void mark_extended_toward_goal(NodeId id) { nodes_.at(id).extended_toward_goal = true; }

  /// True when `ancestor` lies on the root path of `id` (inclusive).
  bool is_ancestor(NodeId ancestor, NodeId id) const;

  /// Node ids from the root down to `id`.
  std::vector<NodeId> path_to(NodeId id) const;

  /// Nodes whose parent or chain changed since the last call.
  std::vector<NodeId> take_touched();

private:
  int width_;
  std::size_t words_;
  Configuration goal_;
  std::vector<TreeNode> nodes_;
  std::vector<std::uint64_t> bits_;
  std::unordered_map<Configuration, NodeId, ConfigurationHash> index_;
  std::size_t overlap_sum_ = 0;
  std::vector<NodeId> touched_;
};

/// (overlap + 1) / max(|com_a - com_b|, 0.1). Larger means closer.
double heuristic(const Configuration &a, const Configuration &b);

/// bias_base + (bias_max - bias_base) * mean_overlap / n.
double dynamic_bias(const Tree &tree, const PlannerParams &params);

/// Random connected n-tile polyomino: a uniformly chosen free seed cell (from
/// a free component with at least n cells) grown by uniformly chosen free
/// frontier cells. Throws no_room when no component is large enough.
Configuration sample_random_config(const GridMap &map, std::size_t n, std::mt19937_64 &rng);

/// Node maximizing heuristic(node, q); ties go to the lowest id. With
/// `exclude_extended_to_goal`, nodes already extended toward the goal are
/// skipped and nullopt signals that none is eligible.
std::optional<NodeId> nearest_node(const Tree &tree, const Configuration &q,
                                   bool exclude_extended_to_goal);

/// Up to `rad` local-planner dropoffs from a node toward q; nullopt when no
/// dropoff was produced.
std::optional<Candidate> extend(const Tree &tree, NodeId from, const Configuration &q,
                                const GridMap &map, const PlannerParams &params,
                                LocalPlanner planner);

enum class InsertResult { inserted, updated, ignored };

struct InsertOutcome {
  InsertResult result = InsertResult::ignored;
  NodeId id = kNoParent;
};

/// New configurations are inserted. A repeated configuration is re-parented
/// to the candidate's parent when that is cheaper (its immediate children
/// are re-costed), otherwise ignored.
InsertOutcome insert_or_update(Tree &tree, Candidate candidate, const GridMap &map);

/// Chain of at most `rad` local-planner dropoffs from a node to exactly
/// `target`, or nullopt.
struct Connection {
  std::vector<Dropoff> moves;
  std::int64_t cost = 0;
  RobotState robot;
};
std::optional<Connection> connect(const TreeNode &from, const Configuration &target,
                                  const GridMap &map, std::size_t rad, LocalPlanner planner);

/// Two-pass rewiring around a freshly inserted node: first the cheapest
/// feasible parent for it, then every node that becomes cheaper through it.
/// Only immediate children of re-parented nodes are re-costed; deeper
/// descendants keep stale costs. Returns the number of edges changed.
std::size_t rewire(Tree &tree, NodeId new_id, const GridMap &map, const PlannerParams &params,
                   LocalPlanner planner);

enum class PlanStatus { found, not_found };

struct CostCheckpoint {
  std::size_t nodes = 0;
  std::optional<std::int64_t> best_cost;
};

struct PlanResult {
  PlanStatus status = PlanStatus::not_found;
  std::vector<PlanStep> steps; // best root-to-goal sequence seen, replayed
  SequenceCosts costs;
  std::size_t nodes_created = 0;
  std::optional<std::size_t> nodes_to_first_solution;
  std::size_t iterations = 0;
  std::size_t rewires = 0;
  std::vector<CostCheckpoint> curve;
  std::optional<std::int64_t> initial_solution_cost;
  // The goal node as the tree holds it at the end: stored cost, and the
  // cost obtained by replaying its current root path.
  std::optional<std::int64_t> tree_goal_cost;
  std::optional<std::int64_t> tree_goal_replay_cost;
  bool time_limit_hit = false;
};

/// Runs the tree planner. `initial_solution`, when non-empty, must start at s
/// and end at g; it is inserted as a chain of nodes of `rad` dropoffs each.
/// Throws size_mismatch, separate_components, invalid_configuration or
/// invalid_params.
PlanResult plan(const Configuration &s, const Configuration &g, const GridMap &map,
                const PlannerParams &params, LocalPlanner planner,
                std::span<const PlanStep> initial_solution = {});

} // namespace polyreconf
