#pragma once

#include <stdexcept>
#include <string>

namespace ccrlink {

/// Argument outside a function's mathematical domain.
class domain_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach the requested tolerance.
/// Carries the best estimate obtained and a bound on its error.
class numerical_error : public std::runtime_error {
  public:
    numerical_error(const std::string& what, double best, double bound)
        : std::runtime_error(what + " (best estimate " + std::to_string(best) +
                             ", error bound " + std::to_string(bound) + ")"),
          best_estimate(best), error_bound(bound) {}

    double best_estimate;
    double error_bound;
};

/// Bad or inconsistent scenario configuration. line == 0 means "not tied to
/// a specific config line".
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what, int line_no = 0)
        : std::runtime_error(line_no > 0 ? what + " (line " + std::to_string(line_no) + ")"
                                         : what),
          line(line_no) {}

    int line;
};

/// Moment matching could not locate distribution parameters at the required
/// residual, even after the fallback reseed.
class estimation_error : public std::runtime_error {
  public:
    estimation_error(const std::string& what, double residual)
        : std::runtime_error(what + " (best residual " + std::to_string(residual) + ")"),
          best_residual(residual) {}

    double best_residual;
};

} // namespace ccrlink
