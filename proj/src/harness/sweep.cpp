#include "polyreconf/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "polyreconf/fixtures.hpp"

namespace polyreconf::harness {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= s.size()) {
    const auto comma = s.find(',', begin);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    auto item = trim(s.substr(begin, end - begin));
    if (!item.empty())
      out.push_back(std::move(item));
    if (comma == std::string_view::npos)
      break;
    begin = comma + 1;
  }
  return out;
}

template <typename T> T parse_number(const std::string &text, int line, int column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(line, column, "malformed number '" + text + "'");
  return value;
}

bool parse_bool(const std::string &text, int line, int column) {
  if (text == "true" || text == "1" || text == "yes")
    return true;
  if (text == "false" || text == "0" || text == "no")
    return false;
  throw ParseError(line, column, "expected true or false, got '" + text + "'");
}

std::string fixed(double value, int digits = 3) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

struct Mean {
  double sum = 0;
  std::size_t count = 0;
  void add(double v) {
    sum += v;
    ++count;
  }
  std::optional<double> value() const {
    return count ? std::optional<double>(sum / static_cast<double>(count)) : std::nullopt;
  }
};

std::string csv_optional(std::optional<double> v) { return v ? fixed(*v) : std::string(); }

std::string percent(std::size_t hits, std::size_t total) {
  return total ? fixed(100.0 * static_cast<double>(hits) / static_cast<double>(total), 1) : "";
}

// Group labels in first-appearance order, with the maps of each.
std::vector<std::pair<std::string, std::vector<std::size_t>>> groups_of(const SweepResult &r) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < r.maps.size(); ++i) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto &g) { return g.first == r.maps[i].group; });
    if (it == groups.end())
      groups.push_back({r.maps[i].group, {i}});
    else
      it->second.push_back(i);
  }
  return groups;
}

// Mean cost of the solved runs of one (map, planner, bias, rad) setting.
using SettingKey = std::tuple<std::size_t, PlannerId, std::size_t, std::size_t>;

std::map<SettingKey, Mean> mean_costs(const SweepResult &result) {
  std::map<SettingKey, Mean> means;
  for (const auto &cell : result.cells) {
    auto &m = means[{cell.map_index, cell.planner, cell.bias_index, cell.rad_index}];
    if (cell.record.status == RunStatus::solved)
      m.add(static_cast<double>(cell.record.total_cost));
  }
  return means;
}

// Lowest mean cost of a planner on a map over all of its settings.
std::optional<double> best_mean(const std::map<SettingKey, Mean> &means, std::size_t map,
                                PlannerId planner, std::optional<std::size_t> rad_index = {}) {
  std::optional<double> best;
  for (const auto &[key, mean] : means) {
    const auto &[m, p, b, r] = key;
    if (m != map || p != planner || (rad_index && r != *rad_index))
      continue;
    if (auto v = mean.value(); v && (!best || *v < *best))
      best = v;
  }
  return best;
}

} // namespace

void SweepSpec::validate() const {
  if (planners.empty())
    throw PlanningError(Errc::invalid_params, "sweep needs at least one planner");
  if (map_files.empty() && (random.densities.empty() || random.maps_per_density == 0))
    throw PlanningError(Errc::invalid_params, "sweep needs map files or a random family");
  if (seeds == 0 || max_nodes == 0)
    throw PlanningError(Errc::invalid_params, "seeds and max_nodes must be positive");
  if (bias_max.empty() || rad.empty())
    throw PlanningError(Errc::invalid_params, "bias_max and rad lists must not be empty");
  if (time_limit < 0)
    throw PlanningError(Errc::invalid_params, "time_limit must not be negative");
  for (double b : bias_max) {
    PlannerParams p;
    p.bias_base = bias_base;
    p.bias_max = b;
    p.validate();
  }
  for (std::size_t r : rad)
    if (r == 0)
      throw PlanningError(Errc::invalid_params, "rad must be positive");
}

SweepSpec parse_sweep_spec(std::string_view text) {
  SweepSpec spec;
  spec.planners.clear();
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string content = trim(raw);
    if (content.empty())
      continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ParseError(line, 1, "expected key = value");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const int col = static_cast<int>(raw.find('=')) + 2;
    const auto items = split_list(value);

    if (key == "maps") {
      spec.map_files = items;
    } else if (key == "planners") {
      spec.planners.clear();
      for (const auto &name : items) {
        const auto id = planner_from_string(name);
        if (!id)
          throw ParseError(line, col, "unknown planner '" + name + "'");
        spec.planners.push_back(*id);
      }
    } else if (key == "random.width") {
      spec.random.width = parse_number<int>(value, line, col);
    } else if (key == "random.height") {
      spec.random.height = parse_number<int>(value, line, col);
    } else if (key == "random.tiles") {
      spec.random.tiles = parse_number<std::size_t>(value, line, col);
    } else if (key == "random.densities") {
      spec.random.densities.clear();
      for (const auto &d : items)
        spec.random.densities.push_back(parse_number<double>(d, line, col));
    } else if (key == "random.maps_per_density") {
      spec.random.maps_per_density = parse_number<std::size_t>(value, line, col);
    } else if (key == "bias_base") {
      spec.bias_base = parse_number<double>(value, line, col);
    } else if (key == "bias_max") {
      spec.bias_max.clear();
      for (const auto &b : items)
        spec.bias_max.push_back(parse_number<double>(b, line, col));
    } else if (key == "rad") {
      spec.rad.clear();
      for (const auto &r : items)
        spec.rad.push_back(parse_number<std::size_t>(r, line, col));
    } else if (key == "seeds") {
      spec.seeds = parse_number<std::size_t>(value, line, col);
    } else if (key == "max_nodes") {
      spec.max_nodes = parse_number<std::size_t>(value, line, col);
    } else if (key == "checkpoint") {
      spec.checkpoint = parse_number<std::size_t>(value, line, col);
    } else if (key == "time_limit") {
      spec.time_limit = parse_number<double>(value, line, col);
    } else if (key == "initial_solution") {
      spec.initial_solution = parse_bool(value, line, col);
    } else if (key == "master_seed") {
      spec.master_seed = parse_number<std::uint64_t>(value, line, col);
    } else if (key == "threads") {
      spec.threads = parse_number<std::size_t>(value, line, col);
    } else {
      throw ParseError(line, 1, "unknown key '" + key + "'");
    }
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(0, 0, "cannot open sweep spec '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_sweep_spec(buffer.str());
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t map_index,
                        std::size_t seed_index) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ map_index) ^ seed_index);
}

std::vector<SweepMap> sweep_maps(const SweepSpec &spec) {
  std::vector<SweepMap> maps;
  for (const auto &path : spec.map_files)
    maps.push_back({std::filesystem::path(path).stem().string(), "files", load_map_file(path)});
  for (std::size_t d = 0; d < spec.random.densities.size(); ++d) {
    const double density = spec.random.densities[d];
    for (std::size_t j = 0; j < spec.random.maps_per_density; ++j) {
      // Redraw on the rare seed whose corridor leaves too little room.
      std::optional<InstanceSpec> generated;
      std::string last_error;
      for (std::uint64_t attempt = 0; attempt < 64 && !generated; ++attempt) {
        const std::uint64_t seed =
            splitmix64(cell_seed(spec.master_seed ^ 0x6D61707300000000ULL, d, j) + attempt);
        try {
          generated = gen_random_map(spec.random.width, spec.random.height, spec.random.tiles,
                                     density, seed);
        } catch (const PlanningError &e) {
          last_error = e.what();
        }
      }
      if (!generated)
        throw PlanningError(Errc::infeasible, "random map generation failed: " + last_error);
      maps.push_back({generated->label, fixed(density, 2), generated->as_map()});
    }
  }
  return maps;
}

SweepResult run_sweep(const SweepSpec &spec) {
  spec.validate();
  SweepResult result;
  result.maps = sweep_maps(spec);

  for (std::size_t m = 0; m < result.maps.size(); ++m)
    for (PlannerId planner : spec.planners) {
      if (!is_tree_planner(planner)) {
        result.cells.push_back({m, planner, 0, 0, 0, {}});
        continue;
      }
      for (std::size_t b = 0; b < spec.bias_max.size(); ++b)
        for (std::size_t r = 0; r < spec.rad.size(); ++r)
          for (std::size_t s = 0; s < spec.seeds; ++s)
            result.cells.push_back({m, planner, b, r, s, {}});
    }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) {
      SweepCell &cell = result.cells[i];
      const SweepMap &map = result.maps[cell.map_index];
      RunOptions options;
      options.params.bias_base = spec.bias_base;
      options.params.bias_max = spec.bias_max[cell.bias_index];
      options.params.rad = spec.rad[cell.rad_index];
      options.params.max_nodes = spec.max_nodes;
      options.params.checkpoint_interval = spec.checkpoint;
      if (spec.time_limit > 0)
        options.params.time_limit_seconds = spec.time_limit;
      options.params.seed =
          is_tree_planner(cell.planner) ? cell_seed(spec.master_seed, cell.map_index, cell.seed_index) : 0;
      options.initial_solution = spec.initial_solution;
      try {
        cell.record = run_planner(map.instance, map.label, cell.planner, options);
      } catch (const std::exception &e) {
        cell.record = RunRecord{};
        cell.record.label = map.label;
        cell.record.planner = cell.planner;
        cell.record.params = options.params;
        cell.record.status = is_tree_planner(cell.planner) ? RunStatus::not_found : RunStatus::stuck;
        cell.record.message = std::string("error: ") + e.what();
      }
    }
  };
  std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, result.cells.size()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back(worker);
  pool.clear();
  return result;
}

std::string records_jsonl(const SweepResult &result) {
  std::string out;
  for (const auto &cell : result.cells)
    out += serialize_record(cell.record) + "\n";
  return out;
}

std::string summary_csv(const SweepSpec &spec, const SweepResult &result) {
  std::string out = "group,map,planner,bias_max,rad,runs,solved,success_pct,mean_cost,"
                    "mean_nodes_to_first_solution\n";
  std::size_t i = 0;
  while (i < result.cells.size()) {
    const SweepCell &first = result.cells[i];
    std::size_t runs = 0, solved = 0;
    Mean cost, nodes;
    for (; i < result.cells.size(); ++i) {
      const SweepCell &c = result.cells[i];
      if (c.map_index != first.map_index || c.planner != first.planner ||
          c.bias_index != first.bias_index || c.rad_index != first.rad_index)
        break;
      ++runs;
      if (c.record.status == RunStatus::solved) {
        ++solved;
        cost.add(static_cast<double>(c.record.total_cost));
      }
      if (c.record.nodes_to_first_solution)
        nodes.add(static_cast<double>(*c.record.nodes_to_first_solution));
    }
    const bool tree = is_tree_planner(first.planner);
    const SweepMap &map = result.maps[first.map_index];
    out += map.group + "," + map.label + "," + std::string(to_string(first.planner)) + "," +
           (tree ? fixed(spec.bias_max[first.bias_index], 2) : "") + "," +
           (tree ? std::to_string(spec.rad[first.rad_index]) : "") + "," + std::to_string(runs) +
           "," + std::to_string(solved) + "," + percent(solved, runs) + "," +
           csv_optional(cost.value()) + "," + csv_optional(nodes.value()) + "\n";
  }
  return out;
}

std::string table_csv(const SweepSpec &spec, const SweepResult &result) {
  const auto means = mean_costs(result);
  const auto groups = groups_of(result);
  std::string out;

  if (!spec.initial_solution) {
    std::vector<PlannerId> contenders;
    bool has_mwpm = false;
    for (PlannerId p : spec.planners) {
      if (p == PlannerId::mwpm_expand)
        has_mwpm = true;
      else
        contenders.push_back(p);
    }
    out = "group,maps";
    for (PlannerId p : contenders)
      out += ",best_" + std::string(to_string(p)) + "_pct";
    if (has_mwpm)
      out += ",mwpm-expand_finds_solution_pct";
    out += "\n";
    for (const auto &[group, maps] : groups) {
      std::vector<std::size_t> best_count(contenders.size(), 0);
      std::size_t mwpm_solved = 0;
      for (std::size_t m : maps) {
        std::optional<std::size_t> winner;
        std::optional<double> winning;
        for (std::size_t c = 0; c < contenders.size(); ++c)
          if (auto v = best_mean(means, m, contenders[c]); v && (!winning || *v < *winning)) {
            winning = v;
            winner = c;
          }
        if (winner)
          ++best_count[*winner];
        if (has_mwpm && best_mean(means, m, PlannerId::mwpm_expand))
          ++mwpm_solved;
      }
      out += group + "," + std::to_string(maps.size());
      for (std::size_t count : best_count)
        out += "," + percent(count, maps.size());
      if (has_mwpm)
        out += "," + percent(mwpm_solved, maps.size());
      out += "\n";
    }
    return out;
  }

  // Seeded trees: greedy baselines are recomputed here so the table does not
  // depend on them being part of the matrix.
  std::vector<PlannerId> trees;
  for (PlannerId p : spec.planners)
    if (is_tree_planner(p))
      trees.push_back(p);
  out = "group,maps,best_initial_glc_pct,best_initial_mwpm-expand_pct";
  for (PlannerId p : trees)
    for (std::size_t r : spec.rad)
      out += ",improves_" + std::string(to_string(p)) + "_rad" + std::to_string(r) + "_pct";
  out += "\n";
  for (const auto &[group, maps] : groups) {
    std::size_t glc_best = 0, mwpm_best = 0;
    std::vector<std::size_t> improved(trees.size() * spec.rad.size(), 0);
    for (std::size_t m : maps) {
      const MapInstance &inst = result.maps[m].instance;
      std::optional<std::int64_t> glc_cost, mwpm_cost;
      try {
        glc_cost = sequence_costs(glc_solve(inst.start, inst.goal, inst.map)).total;
        const auto mwpm = mwpm_expand_solve(inst.start, inst.goal, inst.map);
        if (mwpm.status == SolveStatus::solved)
          mwpm_cost = sequence_costs(mwpm.steps).total;
      } catch (const PlanningError &) {
      }
      if (!glc_cost)
        continue;
      const bool mwpm_wins = mwpm_cost && *mwpm_cost < *glc_cost;
      ++(mwpm_wins ? mwpm_best : glc_best);
      const double initial = static_cast<double>(mwpm_wins ? *mwpm_cost : *glc_cost);
      for (std::size_t t = 0; t < trees.size(); ++t)
        for (std::size_t r = 0; r < spec.rad.size(); ++r)
          if (auto v = best_mean(means, m, trees[t], r); v && *v < initial)
            ++improved[t * spec.rad.size() + r];
    }
    out += group + "," + std::to_string(maps.size()) + "," + percent(glc_best, maps.size()) + "," +
           percent(mwpm_best, maps.size());
    for (std::size_t count : improved)
      out += "," + percent(count, maps.size());
    out += "\n";
  }
  return out;
}

std::string curves_csv(const SweepSpec &spec, const SweepResult &result) {
  std::map<SettingKey, std::map<std::size_t, Mean>> curves;
  for (const auto &cell : result.cells) {
    if (!is_tree_planner(cell.planner))
      continue;
    auto &curve = curves[{cell.map_index, cell.planner, cell.bias_index, cell.rad_index}];
    for (const auto &point : cell.record.cost_curve) {
      auto &mean = curve[point.nodes];
      if (point.best_cost)
        mean.add(static_cast<double>(*point.best_cost));
    }
  }
  std::string out = "map,planner,bias_max,rad,nodes,mean_best_cost,runs_with_solution\n";
  for (const auto &[key, curve] : curves) {
    const auto &[m, p, b, r] = key;
    for (const auto &[nodes, mean] : curve)
      out += result.maps[m].label + "," + std::string(to_string(p)) + "," +
             fixed(spec.bias_max[b], 2) + "," + std::to_string(spec.rad[r]) + "," +
             std::to_string(nodes) + "," + csv_optional(mean.value()) + "," +
             std::to_string(mean.count) + "\n";
  }
  return out;
}

void write_sweep(const std::string &directory, const SweepSpec &spec, const SweepResult &result) {
  std::filesystem::create_directories(directory);
  auto write = [&](const char *name, const std::string &content) {
    std::ofstream out(std::filesystem::path(directory) / name, std::ios::binary);
    out << content;
    if (!out)
      throw PlanningError(Errc::invalid_params, std::string("cannot write ") + name);
  };
  write("records.jsonl", records_jsonl(result));
  write("summary.csv", summary_csv(spec, result));
  write("table.csv", table_csv(spec, result));
  write("curves.csv", curves_csv(spec, result));
}

} // namespace polyreconf::harness
