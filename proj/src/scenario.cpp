#include "ccrlink/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "ccrlink/alphamu.hpp"
#include "ccrlink/simulate.hpp"
#include "ccrlink/version.hpp"

namespace ccrlink::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct ResolvedRun {
    RunMode mode;
    std::uint64_t samples;
    std::uint64_t seed;
    int workers;

    bool analytic() const { return mode != RunMode::montecarlo; }
    bool montecarlo() const { return mode == RunMode::montecarlo || mode == RunMode::all; }
    channel::PointingMode pointing_mode() const {
        return mode == RunMode::analytic_approx ? channel::PointingMode::taylor2
                                                : channel::PointingMode::exact;
    }
};

ResolvedRun resolve(const RunConfig& run, const RunOverrides& ov) {
    ResolvedRun r;
    r.mode = ov.mode.value_or(run.mode);
    r.samples = ov.samples.value_or(run.samples);
    r.seed = ov.seed.value_or(run.seed);
    r.workers = ov.workers.value_or(run.workers);
    return r;
}

ScenarioConfig resolved_copy(const ScenarioConfig& cfg, const ResolvedRun& run) {
    ScenarioConfig out = cfg;
    out.run.mode = run.mode;
    out.run.samples = run.samples;
    out.run.seed = run.seed;
    out.run.workers = run.workers;
    return out;
}

void write_manifest(const fs::path& path, const ScenarioConfig& resolved,
                    const std::string& command) {
    std::ofstream out(path);
    if (!out)
        throw config_error("cannot write manifest '" + path.string() + "'");
    write_resolved_config(out, resolved);
    out << "\n[provenance]\n";
    out << "library_version = " << kVersion << "\n";
    out << "command = " << command << "\n";
}

// Per-row values along the sweep. Only a sigma_s sweep changes the
// distribution of S; sweeps over p_gs or p_th only move the threshold.
struct RowPhysics {
    double sweep_value;
    double sigma_s;
    double p_gs;
    double p_th;
    double c;
    double threshold; // p_th / c
};

RowPhysics row_physics(const ScenarioConfig& cfg, double value) {
    geometry::LinkGeometry g = cfg.geometry;
    switch (cfg.sweep.variable) {
    case SweepVariable::p_gs: g.p_gs = value; break;
    case SweepVariable::sigma_s: g.sigma_s = value; break;
    case SweepVariable::p_th: g.p_th = value; break;
    }
    const auto budget = geometry::derive_budget(g);
    return {value, g.sigma_s, g.p_gs, g.p_th, budget.c, g.p_th / budget.c};
}

struct GroupAnalytic {
    bool ok = false;
    std::string error;
    channel::MomentSet moments{};
    alphamu::AlphaMuParams fit{};
};

struct GroupEmpirical {
    simulate::SimSummary sim;
    std::vector<simulate::ConventionalSummary> conventional; // per baseline fraction
};

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunOverrides& overrides,
                       const std::string& out_dir, std::ostream& log) {
    cfg.validate();
    const ResolvedRun run = resolve(cfg.run, overrides);
    fs::create_directories(out_dir);

    const auto layout = cfg.layout.build();
    const auto base_budget = geometry::derive_budget(cfg.geometry);
    for (const auto& wmsg : base_budget.warnings)
        log << "warning: " << wmsg << "\n";

    // Group sweep rows sharing one distribution of S.
    std::vector<RowPhysics> rows;
    rows.reserve(cfg.sweep.values.size());
    for (double v : cfg.sweep.values)
        rows.push_back(row_physics(cfg, v));
    std::map<double, std::vector<std::size_t>> groups; // sigma_s -> row indices
    for (std::size_t i = 0; i < rows.size(); ++i)
        groups[rows[i].sigma_s].push_back(i);

    std::ofstream csv(fs::path(out_dir) / "outage.csv");
    std::ofstream timing(fs::path(out_dir) / "timing.csv");
    if (!csv || !timing)
        throw config_error("cannot write output files in '" + out_dir + "'");

    csv << "sweep_variable,sweep_value,sigma_s,c,threshold,alpha,mu,r_hat,"
           "outage_analytic,m1_analytic,m2_analytic,m4_analytic,"
           "outage_empirical,outage_se,m1_empirical,m1_se,m2_empirical,m2_se,"
           "m4_empirical,m4_se";
    const std::size_t n_fracs = cfg.baseline ? cfg.baseline->p_t_fractions.size() : 0;
    for (std::size_t f = 0; f < n_fracs; ++f)
        csv << ",conv_outage_" << f + 1 << ",conv_se_" << f + 1;
    csv << ",status\n";
    timing << "sweep_value,wall_ms\n";

    RunResult result;
    result.rows_total = static_cast<int>(rows.size());

    for (const auto& [sigma_s, members] : groups) {
        auto group_t0 = Clock::now();
        geometry::LinkGeometry g = cfg.geometry;
        g.sigma_s = sigma_s;
        const auto budget = geometry::derive_budget(g);

        GroupAnalytic analytic;
        if (run.analytic()) {
            try {
                analytic.moments = channel::s_moment_set(cfg.turbulence, layout, budget.w,
                                                         sigma_s, budget.a0,
                                                         run.pointing_mode());
                analytic.fit = alphamu::fit_alpha_mu(analytic.moments);
                analytic.ok = true;
            } catch (const std::exception& ex) {
                analytic.error = ex.what();
                log << "warning: analytic pipeline failed for sigma_s = " << sigma_s
                    << ": " << ex.what() << "\n";
            }
        }

        GroupEmpirical empirical;
        if (run.montecarlo()) {
            std::vector<double> thresholds;
            for (std::size_t i : members)
                thresholds.push_back(rows[i].threshold);
            simulate::SimulationPlan plan{
                run.samples, run.seed, run.workers,
                simulate::Scenario{layout, cfg.turbulence, budget.w, sigma_s, budget.a0},
                std::move(thresholds)};
            empirical.sim = simulate::simulate_outage(plan);

            if (cfg.baseline) {
                const double w_b = cfg.baseline->w.value_or(budget.w);
                const double a0_b = cfg.baseline->a0.value_or(
                    2.0 * cfg.geometry.a_gs * cfg.geometry.a_gs / (w_b * w_b));
                for (double frac : cfg.baseline->p_t_fractions) {
                    simulate::ConventionalPlan cp;
                    cp.samples = run.samples;
                    cp.seed = run.seed;
                    cp.workers = run.workers;
                    cp.turbulence = cfg.turbulence;
                    cp.baseline.w = w_b;
                    cp.baseline.a0 = a0_b;
                    cp.baseline.g_rx = cfg.baseline->g_rx;
                    cp.baseline.h_ell = std::exp(-budget.sigma_atm * cfg.geometry.z);
                    cp.baseline.sigma_s = sigma_s;
                    cp.baseline.p_t = 1.0; // thresholds absorb P_T per row
                    for (std::size_t i : members)
                        cp.thresholds.push_back(rows[i].p_th / (frac * rows[i].p_gs));
                    empirical.conventional.push_back(simulate::conventional_outage(cp));
                }
            }
        }

        const double group_ms = elapsed_ms(group_t0);
        for (std::size_t k = 0; k < members.size(); ++k) {
            const auto& row = rows[members[k]];
            auto row_t0 = Clock::now();
            std::string status = "ok";

            csv << to_string(cfg.sweep.variable) << "," << fmt(row.sweep_value) << ","
                << fmt(row.sigma_s) << "," << fmt(row.c) << "," << fmt(row.threshold) << ",";
            if (run.analytic() && analytic.ok) {
                double pout;
                try {
                    pout = alphamu::outage_probability(row.p_th, row.c, analytic.fit);
                } catch (const std::exception&) {
                    pout = std::nan("");
                }
                csv << fmt(analytic.fit.alpha) << "," << fmt(analytic.fit.mu) << ","
                    << fmt(analytic.fit.r_hat) << "," << fmt(pout) << ","
                    << fmt(analytic.moments.m1) << "," << fmt(analytic.moments.m2) << ","
                    << fmt(analytic.moments.m4);
            } else {
                if (run.analytic()) status = "analytic_failed: " + analytic.error;
                csv << ",,,,,,";
            }
            if (run.montecarlo()) {
                const auto& sim = empirical.sim;
                csv << "," << fmt(sim.outage[k]) << "," << fmt(sim.outage_se[k]) << ","
                    << fmt(sim.m1.value) << "," << fmt(sim.m1.std_error) << ","
                    << fmt(sim.m2.value) << "," << fmt(sim.m2.std_error) << ","
                    << fmt(sim.m4.value) << "," << fmt(sim.m4.std_error);
            } else {
                csv << ",,,,,,,,";
            }
            for (std::size_t f = 0; f < n_fracs; ++f) {
                if (run.montecarlo())
                    csv << "," << fmt(empirical.conventional[f].outage[k]) << ","
                        << fmt(empirical.conventional[f].outage_se[k]);
                else
                    csv << ",,";
            }
            csv << "," << status << "\n";
            if (status != "ok") ++result.rows_failed;

            // The shared group work is attributed to the group's first row.
            timing << fmt(row.sweep_value) << ","
                   << fmt((k == 0 ? group_ms : 0.0) + elapsed_ms(row_t0)) << "\n";
            log << "sweep " << to_string(cfg.sweep.variable) << " = " << row.sweep_value
                << ": " << status << "\n";
        }
    }

    write_manifest(fs::path(out_dir) / "manifest.txt", resolved_copy(cfg, run), "outage");
    return result;
}

RunResult run_moment_report(const ScenarioConfig& cfg, const RunOverrides& overrides,
                            const std::string& out_dir, std::ostream& log) {
    cfg.validate();
    const ResolvedRun run = resolve(cfg.run, overrides);
    fs::create_directories(out_dir);

    const auto layout = cfg.layout.build();
    const auto budget = geometry::derive_budget(cfg.geometry);
    std::vector<double> grid = cfg.moment_grid;
    if (grid.empty())
        grid = {0.01, 0.02, 0.05, 0.1};

    std::ofstream csv(fs::path(out_dir) / "moments.csv");
    if (!csv)
        throw config_error("cannot write output files in '" + out_dir + "'");
    csv << "sigma_over_w,sigma_s,order,m_exact,m_taylor2,m_taylor1,"
           "rel_err_taylor2,rel_err_taylor1,status\n";

    RunResult result;
    for (double ratio : grid) {
        const double sigma_s = ratio * budget.w;
        for (int order : {1, 2, 4}) {
            ++result.rows_total;
            std::string status = "ok";
            double ex = std::nan(""), t2 = std::nan(""), t1 = std::nan("");
            try {
                ex = channel::s_moment(order, cfg.turbulence, layout, budget.w, sigma_s,
                                       budget.a0, channel::PointingMode::exact);
                t2 = channel::s_moment(order, cfg.turbulence, layout, budget.w, sigma_s,
                                       budget.a0, channel::PointingMode::taylor2);
                t1 = channel::s_moment(order, cfg.turbulence, layout, budget.w, sigma_s,
                                       budget.a0, channel::PointingMode::taylor1);
            } catch (const std::exception& ex_caught) {
                status = std::string("failed: ") + ex_caught.what();
                ++result.rows_failed;
            }
            csv << fmt(ratio) << "," << fmt(sigma_s) << "," << order << "," << fmt(ex) << ","
                << fmt(t2) << "," << fmt(t1) << "," << fmt(std::abs(t2 - ex) / ex) << ","
                << fmt(std::abs(t1 - ex) / ex) << "," << status << "\n";
        }
        log << "moment grid sigma_s/w = " << ratio << " done\n";
    }

    write_manifest(fs::path(out_dir) / "manifest.txt", resolved_copy(cfg, run), "moments");
    return result;
}

} // namespace ccrlink::cli
