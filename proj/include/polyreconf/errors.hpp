#pragma once

#include <stdexcept>
#include <string>

namespace polyreconf {

enum class Errc {
  source_on_obstacle,
  source_not_on_tiles,
  size_mismatch,
  infeasible,
  illegal_pickup,
  illegal_placement,
  disconnected_result,
  no_move_found,
  budget_exceeded,
  separate_components,
  broken_chain,
  no_room,
  too_small,
  invalid_params,
  invalid_configuration,
  parse_error,
};

const char *to_string(Errc code) noexcept;

class PlanningError : public std::runtime_error {
public:
  PlanningError(Errc code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

/// Raised by the map and record readers; positions are 1-based.
class ParseError : public PlanningError {
public:
  ParseError(int line, int column, const std::string &what)
      : PlanningError(Errc::parse_error, "line " + std::to_string(line) +
                                             ", column " +
                                             std::to_string(column) + ": " +
                                             what),
        line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

} // namespace polyreconf
