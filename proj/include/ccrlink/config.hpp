#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccrlink/channel_moments.hpp"
#include "ccrlink/geometry.hpp"

namespace ccrlink::cli {

enum class RunMode { analytic_exact, analytic_approx, montecarlo, all };
enum class SweepVariable { p_gs, sigma_s, p_th };
enum class LayoutKind { linear, circular, explicit_coords };

struct LayoutConfig {
    LayoutKind kind = LayoutKind::circular;
    int m = 1;
    double spacing = 0.0; // linear
    double radius = 0.0;  // circular
    std::vector<geometry::Vec2> coords; // explicit
    double min_spacing = geometry::CCRLayout::kDefaultMinSpacing;

    geometry::CCRLayout build() const;
};

struct SweepConfig {
    SweepVariable variable = SweepVariable::p_gs;
    std::vector<double> values;
};

struct RunConfig {
    RunMode mode = RunMode::all;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 0; // 0 = hardware concurrency
};

struct BaselineConfig {
    std::vector<double> p_t_fractions; // of P_GS
    std::optional<double> w;           // beacon beamwidth; default: uplink w
    std::optional<double> a0;          // peak pointing gain; default: 2 a_gs^2 / w^2
    double g_rx = 1.0;
};

struct ScenarioConfig {
    geometry::LinkGeometry geometry;
    LayoutConfig layout;
    channel::TurbulenceParams turbulence;
    SweepConfig sweep;
    RunConfig run;
    std::optional<BaselineConfig> baseline;
    std::vector<double> moment_grid; // sigma_s / w ratios for the moments report

    void validate() const;
};

/// Parses the line-oriented key = value format with [section] headers and
/// '#' comments. Unknown sections or keys, malformed values and missing
/// required fields raise config_error with the offending line number.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

/// Serializes the fully resolved configuration (presets expanded, overrides
/// applied) in the same format, so a manifest can be re-run directly.
void write_resolved_config(std::ostream& out, const ScenarioConfig& cfg);

std::string to_string(RunMode mode);
std::string to_string(SweepVariable v);

} // namespace ccrlink::cli
