#include "polyreconf/harness/commands.hpp"

#include <fstream>
#include <ostream>

#include "polyreconf/fixtures.hpp"
#include "polyreconf/harness/sweep.hpp"
#include "polyreconf/harness/validate.hpp"

namespace polyreconf::harness {

namespace {

void emit(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file)
    throw PlanningError(Errc::invalid_params, "cannot write '" + path + "'");
}

// Shared body of the commands that take an exception-prone action.
template <typename Body> int guarded(std::ostream &err, Body body) {
  try {
    return body();
  } catch (const PlanningError &e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == Errc::parse_error)
      return kExitParseError;
    return e.code() == Errc::infeasible ? kExitInfeasible : kExitFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

std::string map_label(const std::string &path) {
  const auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos && dot > 0)
    name.erase(dot);
  return name;
}

} // namespace

int cmd_solve(const SolveOptions &options, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const MapInstance instance = load_map_file(options.map_path);
    const RunRecord record =
        run_planner(instance, map_label(options.map_path), options.planner, options.run);
    emit(options.out_path, serialize_record(record) + "\n", out);
    if (!record.message.empty())
      err << to_string(record.status) << ": " << record.message << "\n";
    if (!options.frames_dir.empty())
      write_frames(options.frames_dir, render_frames(instance, record, options.frame_format),
                   options.frame_format);
    return exit_code_for(record.status);
  });
}

int cmd_validate(const ValidateOptions &options, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const MapInstance instance = load_map_file(options.map_path);
    const RunRecord record = load_record_file(options.record_path);
    const ValidationReport report = validate_record(instance, record);
    emit(options.out_path, to_json(report).dump() + "\n", out);
    if (!report.ok)
      err << "validation failed: " << report.failure << "\n";
    return report.ok ? kExitSolved : kExitFailure;
  });
}

int cmd_sweep(const SweepOptions &options, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    SweepSpec spec = load_sweep_spec(options.spec_path);
    if (options.seed)
      spec.master_seed = *options.seed;
    if (options.threads)
      spec.threads = *options.threads;
    const SweepResult result = run_sweep(spec);
    write_sweep(options.out_dir, spec, result);
    out << "sweep: " << result.maps.size() << " maps, " << result.cells.size()
        << " runs written to " << options.out_dir << "\n";
    return kExitSolved;
  });
}

int cmd_frames(const FramesOptions &options, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const MapInstance instance = load_map_file(options.map_path);
    const RunRecord record = load_record_file(options.record_path);
    const ValidationReport report = validate_record(instance, record);
    if (!report.ok) {
      err << "validation failed: " << report.failure << "\n";
      return kExitFailure;
    }
    const auto count = write_frames(options.out_dir, render_frames(instance, record, options.format),
                                    options.format);
    out << count << " frames written to " << options.out_dir << "\n";
    return kExitSolved;
  });
}

int cmd_gen(const GenOptions &options, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    InstanceSpec spec = [&] {
      if (options.kind == "detour")
        return gen_obstacle_detour(options.n, options.k);
      if (options.kind == "c-shape")
        return gen_c_shape(options.n);
      if (options.kind == "cc-shape")
        return gen_cc_shape(options.n);
      if (options.kind == "random") {
        if (options.n < 1)
          throw PlanningError(Errc::invalid_params, "n must be positive");
        return gen_random_map(options.width, options.height, static_cast<std::size_t>(options.n),
                              options.density, options.seed);
      }
      throw PlanningError(Errc::invalid_params, "unknown generator '" + options.kind + "'");
    }();
    emit(options.out_path, serialize_map(spec.as_map()), out);
    if (!options.out_path.empty())
      out << spec.label << " written to " << options.out_path << "\n";
    return kExitSolved;
  });
}

} // namespace polyreconf::harness
