#pragma once

#include <iosfwd>
#include <string>

#include "ccrlink/config.hpp"

namespace ccrlink::cli {

struct RunOverrides {
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<RunMode> mode;
};

struct RunResult {
    int rows_total = 0;
    int rows_failed = 0;
};

/// Executes the sweep described by the config and writes outage.csv,
/// timing.csv and manifest.txt into out_dir. Rows whose evaluation fails
/// numerically are marked in the status column and the run continues.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOverrides& overrides,
                       const std::string& out_dir, std::ostream& log);

/// Writes moments.csv: exact vs. Taylor-approximated moments of S (2nd- and
/// 1st-order variants) over a grid of sigma_s / w ratios.
RunResult run_moment_report(const ScenarioConfig& cfg, const RunOverrides& overrides,
                            const std::string& out_dir, std::ostream& log);

} // namespace ccrlink::cli
