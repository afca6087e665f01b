#ifndef HBI_ERRORS_HPP
#define HBI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hbi {

/// Malformed input file. `line` is 1-based; 0 means the file itself (missing,
/// unreadable, structurally empty).
struct ParseError : std::runtime_error {
  ParseError(std::string file, int line_no, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line_no) + ": " + message),
        path(std::move(file)),
        line(line_no) {}
  std::string path;
  int line;
};

/// Visual and textual token sets whose embedding dimensions disagree.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Exact enumeration requested past the configured player cap. Exact ops
/// refuse rather than silently sample; the caller should switch to the
/// estimators.
struct CapExceeded : std::runtime_error {
  CapExceeded(int players, int limit)
      : std::runtime_error("exact enumeration infeasible: " + std::to_string(players) +
                           " players exceeds cap " + std::to_string(limit) +
                           " (use the sampling estimator instead)"),
        n(players),
        cap(limit) {}
  int n;
  int cap;
};

}  // namespace hbi

#endif
