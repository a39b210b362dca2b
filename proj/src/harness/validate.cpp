#include "polyreconf/harness/validate.hpp"

#include <deque>
#include <map>
#include <set>
#include <utility>

namespace polyreconf::harness {

namespace {

using Point = std::pair<int, int>;
using PointSet = std::set<Point>;

constexpr Point kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

std::map<Point, int> flood(const PointSet &cells, Point from) {
  std::map<Point, int> dist;
  if (!cells.count(from))
    return dist;
  std::deque<Point> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    for (const Point &s : kSteps) {
      const Point q{p.first + s.first, p.second + s.second};
      if (cells.count(q) && !dist.count(q)) {
        dist[q] = dist[p] + 1;
        queue.push_back(q);
      }
    }
  }
  return dist;
}

bool connected(const PointSet &cells) {
  return cells.empty() || flood(cells, *cells.begin()).size() == cells.size();
}

Point point(Cell c) { return {c.x, c.y}; }

} // namespace

ValidationReport validate_record(const MapInstance &instance, const RunRecord &record) {
  ValidationReport report;
  PointSet current;
  for (Cell c : instance.start)
    current.insert(point(c));
  PointSet goal;
  for (Cell c : instance.goal)
    goal.insert(point(c));
  std::optional<Point> robot;

  auto fail = [&](StepCheck &check, const std::string &error) {
    check.ok = false;
    check.error = error;
  };

  for (std::size_t i = 0; i < record.sequence.size(); ++i) {
    const Dropoff &move = record.sequence[i];
    StepCheck check;
    check.index = i;
    const Point from = point(move.source);
    const Point to = point(move.target);

    PointSet rest = current;
    rest.erase(from);
    bool touches = false;
    for (const Point &s : kSteps) {
      const Point q{to.first + s.first, to.second + s.second};
      touches = touches || rest.count(q) || (rest.empty() && q == from);
    }

    if (!current.count(from)) {
      fail(check, "IllegalPickup");
    } else if (!connected(rest)) {
      fail(check, "IllegalPickup");
    } else if (from == to || instance.map.is_obstacle(move.target) || rest.count(to) || !touches) {
      fail(check, "IllegalPlacement");
    } else {
      PointSet after = rest;
      after.insert(to);
      if (!connected(after)) {
        fail(check, "DisconnectedResult");
      } else {
        check.pickup_distance = robot ? flood(current, *robot).at(from) : 0;
        PointSet carry = current;
        carry.insert(to);
        check.dropoff_distance = flood(carry, from).at(to);
        if (check.pickup_distance != move.pickup_distance)
          fail(check, "PickupDistanceMismatch");
        else if (check.dropoff_distance != move.dropoff_distance)
          fail(check, "DropoffDistanceMismatch");
        report.empty_travel_time += check.pickup_distance;
        report.carry_time += check.dropoff_distance;
        current = std::move(after);
        robot = to;
      }
    }
    report.steps.push_back(check);
    if (!check.ok) {
      report.ok = false;
      report.first_failure = i;
      report.failure = check.error + " at step " + std::to_string(i);
      break;
    }
  }

  report.total_cost = report.carry_time + report.empty_travel_time;
  report.reached_goal = current == goal;
  report.totals_match = report.ok && report.carry_time == record.carry_time &&
                        report.empty_travel_time == record.empty_travel_time &&
                        report.total_cost == record.total_cost;
  if (report.ok && !report.totals_match) {
    report.ok = false;
    report.failure = "TotalsMismatch";
  }
  if (report.ok && record.status == RunStatus::solved && !report.reached_goal) {
    report.ok = false;
    report.failure = "GoalMismatch";
  }
  return report;
}

nlohmann::ordered_json to_json(const ValidationReport &report) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto &s : report.steps) {
    nlohmann::ordered_json step = {{"index", s.index}, {"ok", s.ok}};
    if (!s.ok)
      step["error"] = s.error;
    step["d_p"] = s.pickup_distance;
    step["d_d"] = s.dropoff_distance;
    steps.push_back(step);
  }
  nlohmann::ordered_json j = {{"ok", report.ok}};
  if (!report.ok)
    j["failure"] = report.failure;
  j["first_failure"] = report.first_failure ? nlohmann::ordered_json(*report.first_failure)
                                            : nlohmann::ordered_json(nullptr);
  j["reached_goal"] = report.reached_goal;
  j["carry_time"] = report.carry_time;
  j["empty_travel_time"] = report.empty_travel_time;
  j["total_cost"] = report.total_cost;
  j["totals_match"] = report.totals_match;
  j["steps"] = steps;
  return j;
}

} // namespace polyreconf::harness
