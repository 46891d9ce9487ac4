#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ccrlink/scenario.hpp"
#include "ccrlink/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    ccrlink::cli::RunOverrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out) {
    cmd->add_option("--config", args.config_path, "scenario config file")->required();
    if (with_out)
        cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option_function<std::uint64_t>(
        "--samples", [&args](std::uint64_t v) { args.overrides.samples = v; },
        "override run.samples");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&args](std::uint64_t v) { args.overrides.seed = v; }, "override run.seed");
    cmd->add_option_function<int>(
        "--workers", [&args](int v) { args.overrides.workers = v; }, "override run.workers");
    cmd->add_option_function<std::string>(
        "--mode",
        [&args](const std::string& v) {
            using ccrlink::cli::RunMode;
            if (v == "analytic-exact")
                args.overrides.mode = RunMode::analytic_exact;
            else if (v == "analytic-approx")
                args.overrides.mode = RunMode::analytic_approx;
            else if (v == "montecarlo")
                args.overrides.mode = RunMode::montecarlo;
            else if (v == "all")
                args.overrides.mode = RunMode::all;
            else
                throw CLI::ValidationError("--mode", "must be analytic-exact, analytic-approx, "
                                                     "montecarlo or all");
        },
        "override run.mode");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage analysis of a retroreflector-based free-space-optical "
                 "fine-tracking link"};
    app.set_version_flag("--version", ccrlink::kVersion);
    app.require_subcommand(1);

    CommonArgs outage_args, moments_args, validate_args;
    CLI::App* cmd_outage =
        app.add_subcommand("outage", "run a sweep: analytic and/or Monte Carlo outage");
    add_common(cmd_outage, outage_args, true);
    CLI::App* cmd_moments =
        app.add_subcommand("moments", "exact vs. approximate moments of S over a jitter grid");
    add_common(cmd_moments, moments_args, true);
    CLI::App* cmd_validate = app.add_subcommand("validate", "parse and validate a config");
    add_common(cmd_validate, validate_args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_validate->parsed()) {
            ccrlink::cli::parse_config_file(validate_args.config_path);
            std::cout << "config ok\n";
            return 0;
        }
        const CommonArgs& args = cmd_outage->parsed() ? outage_args : moments_args;
        const auto cfg = ccrlink::cli::parse_config_file(args.config_path);
        ccrlink::cli::RunResult result;
        if (cmd_outage->parsed())
            result = ccrlink::cli::run_scenario(cfg, args.overrides, args.out_dir, std::cerr);
        else
            result = ccrlink::cli::run_moment_report(cfg, args.overrides, args.out_dir,
                                                     std::cerr);
        if (result.rows_failed > 0) {
            std::cerr << result.rows_failed << " of " << result.rows_total
                      << " rows failed numerically\n";
            return 2;
        }
        return 0;
    } catch (const ccrlink::config_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
