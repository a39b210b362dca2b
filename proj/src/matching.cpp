#include "polyreconf/matching.hpp"

#include <limits>

namespace polyreconf {

DistanceMatrix DistanceMatrix::from_costs(std::size_t n, std::vector<std::int64_t> costs,
                                          std::int64_t sentinel) {
  if (costs.size() != n * n)
    throw PlanningError(Errc::size_mismatch, "cost matrix is not square");
  DistanceMatrix dm;
  dm.rows.resize(n);
  dm.cols.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    dm.rows[i] = {static_cast<int>(i), 0};
    dm.cols[i] = {static_cast<int>(i), 0};
  }
  dm.d = std::move(costs);
  dm.sentinel = sentinel;
  return dm;
}

DistanceMatrix distance_matrix(const GridMap &map, const Configuration &s, const Configuration &g) {
  if (s.size() != g.size())
    throw PlanningError(Errc::size_mismatch, "start has " + std::to_string(s.size()) +
                                                 " tiles, goal has " + std::to_string(g.size()));
  DistanceMatrix dm;
  dm.rows.assign(s.begin(), s.end());
  dm.cols.assign(g.begin(), g.end());
  const auto n = static_cast<std::int64_t>(s.size());
  // Larger than any sum of n finite geodesics.
  dm.sentinel = (static_cast<std::int64_t>(map.cell_count()) + 1) * (n + 1);
  dm.d.assign(dm.rows.size() * dm.cols.size(), dm.sentinel);
  for (std::size_t i = 0; i < dm.rows.size(); ++i) {
    const auto field = bfs_free(map, dm.rows[i]);
    for (std::size_t j = 0; j < dm.cols.size(); ++j)
      if (field.reachable(dm.cols[j]))
        dm.at(i, j) = field.at(dm.cols[j]);
  }
  return dm;
}

namespace {

// Shortest-augmenting-path Hungarian method with dual potentials; on return
// u[i] + v[j] <= cost(i, j) everywhere, with equality on matched pairs.
struct Assignment {
  std::vector<std::size_t> col_of_row;
  std::vector<std::int64_t> u;
  std::vector<std::int64_t> v;
};

Assignment hungarian(const DistanceMatrix &dm) {
  const std::size_t n = dm.size();
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based arrays; index 0 is the virtual column.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j])
          continue;
        const std::int64_t cur = dm.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.col_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j)
    out.col_of_row[row_of_col[j] - 1] = j - 1;
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Every optimal matching lives on the tight edges of an optimal dual. Walk the
// rows in order and give each the smallest tight column that still leaves a
// perfect matching on the remaining rows; feasibility of a swap is an
// alternating path in the tight subgraph.
std::vector<std::size_t> lexicographic_tight_matching(const DistanceMatrix &dm,
                                                      const Assignment &a) {
  const std::size_t n = dm.size();
  std::vector<char> tight(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      tight[i * n + j] = dm.at(i, j) - a.u[i] - a.v[j] == 0;

  std::vector<std::size_t> col_of_row = a.col_of_row;
  std::vector<std::size_t> row_of_col(n);
  for (std::size_t i = 0; i < n; ++i)
    row_of_col[col_of_row[i]] = i;

  std::vector<char> visited(n);
  std::vector<std::size_t> via_row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < col_of_row[i]; ++j) {
      if (!tight[i * n + j])
        continue;
      // Pin (i, j): the row r currently holding j must reach column
      // col_of_row[i] through alternating tight edges over rows > i.
      const std::size_t target = col_of_row[i];
      const std::size_t r0 = row_of_col[j];
      if (r0 < i)
        continue;
      std::fill(visited.begin(), visited.end(), 0);
      std::vector<std::size_t> queue{r0};
      bool found = false;
      std::size_t end_row = n;
      for (std::size_t head = 0; head < queue.size() && !found; ++head) {
        const std::size_t r = queue[head];
        for (std::size_t c = 0; c < n; ++c) {
          if (!tight[r * n + c] || visited[c] || c == j)
            continue;
          visited[c] = 1;
          via_row[c] = r;
          if (c == target) {
            found = true;
            end_row = r;
            break;
          }
          const std::size_t next = row_of_col[c];
          if (next > i)
            queue.push_back(next);
        }
      }
      if (!found)
        continue;
      // Shift columns along the path back to r0, then give j to row i.
      std::size_t c = target;
      std::size_t r = end_row;
      while (true) {
        const std::size_t previous = col_of_row[r];
        col_of_row[r] = c;
        row_of_col[c] = r;
        if (r == r0)
          break;
        c = previous;
        r = via_row[c];
      }
      col_of_row[i] = j;
      row_of_col[j] = i;
      break;
    }
  }
  return col_of_row;
}

} // namespace

Matching min_weight_perfect_matching(const DistanceMatrix &dm) {
  const std::size_t n = dm.size();
  if (dm.cols.size() != n || dm.d.size() != n * n)
    throw PlanningError(Errc::size_mismatch, "distance matrix is not square");
  Matching out;
  if (n == 0)
    return out;

  const auto cols = lexicographic_tight_matching(dm, hungarian(dm));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = cols[i];
    if (!dm.reachable(i, j))
      throw PlanningError(Errc::infeasible, "every perfect matching uses an unreachable pair");
    out.pairs.push_back({dm.rows[i], dm.cols[j], dm.at(i, j), i, j});
    out.total_cost += dm.at(i, j);
  }
  return out;
}

} // namespace polyreconf
