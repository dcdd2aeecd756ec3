#include <CLI11.hpp>

#include "commands.hpp"

using wishart::cli::CliOptions;

int main(int argc, char** argv) {
    CLI::App app{"Covariance of linear spectral statistics of overlapping stochastic "
                 "Wishart matrices: analytic evaluators and Monte Carlo simulation"};
    app.require_subcommand(1);

    CliOptions opt;
    int exit_code = wishart::cli::kExitRuntimeError;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", opt.config_path, "experiment config file (JSON)")
            ->required();
        sub->add_option("--format", opt.format, "report format: csv or json");
        sub->add_option("--out", opt.out_path, "report path ('-' for stdout)");
        sub->add_flag("--dump-effective-config", opt.dump_effective_config,
                      "print the effective config (defaults applied) and exit");
        return sub;
    };

    auto* theory = add_common(app.add_subcommand(
        "theory", "evaluate the limiting covariance matrix analytically"));
    theory->add_flag("--with-quadrature", opt.with_quadrature,
                     "also evaluate the contour quadrature route and report discrepancies");
    theory->callback([&] { exit_code = wishart::cli::cmd_theory(opt); });

    auto* simulate = add_common(
        app.add_subcommand("simulate", "Monte Carlo estimate of the trace covariances"));
    simulate->add_option("--workers", opt.workers, "worker threads (default: config / auto)");
    simulate->callback([&] { exit_code = wishart::cli::cmd_simulate(opt); });

    auto* compare = add_common(app.add_subcommand(
        "compare", "run theory and simulation, report per-pair z-scores"));
    compare->add_option("--workers", opt.workers, "worker threads (default: config / auto)");
    compare->add_option("--z-threshold", opt.z_threshold,
                        "fail when any |z| exceeds this (default 4)");
    compare->callback([&] { exit_code = wishart::cli::cmd_compare(opt); });

    auto* validate = add_common(app.add_subcommand(
        "validate", "check empirical entry-process moments against their targets"));
    validate->callback([&] { exit_code = wishart::cli::cmd_validate(opt); });

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
