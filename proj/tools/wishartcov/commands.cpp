#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>

#include "config.hpp"
#include "report.hpp"
#include "wishart/covariance.hpp"
#include "wishart/errors.hpp"

namespace wishart::cli {

namespace {

struct LoadedConfig {
    ExperimentConfig cfg;
    OutputFormat format;
    std::string out_path;
};

// Parses the config, applies command-line overrides, surfaces warnings.
LoadedConfig load(const CliOptions& opt) {
    ExperimentConfig cfg = parse_config_file(opt.config_path);
    for (const auto& w : cfg.warnings) std::cerr << w << '\n';
    if (opt.workers) {
        if (!cfg.mc) throw ConfigError("--workers given but config has no mc section");
        cfg.mc->workers = *opt.workers;
    }
    OutputFormat format = cfg.output.format;
    if (opt.format) {
        if (*opt.format == "csv")
            format = OutputFormat::Csv;
        else if (*opt.format == "json")
            format = OutputFormat::Json;
        else
            throw ConfigError("--format must be csv or json");
    }
    std::string out_path = opt.out_path.value_or(cfg.output.path);
    return {std::move(cfg), format, std::move(out_path)};
}

// Stream for the report: stdout for "-", a fresh file otherwise.
struct ReportSink {
    explicit ReportSink(const std::string& path) {
        if (path != "-") {
            file.open(path, std::ios::trunc);
            if (!file) throw ConfigError("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file.is_open() ? file : std::cout; }
    std::ofstream file;
};

int dump_and_exit(const ExperimentConfig& cfg) {
    std::cout << effective_config_json(cfg).dump(2) << '\n';
    return kExitOk;
}

McConfig require_mc(const ExperimentConfig& cfg) {
    if (!cfg.mc) throw ConfigError("this command needs an 'mc' section in the config");
    return *cfg.mc;
}

double safe_z(double delta, double se) {
    if (se > 0.0) return delta / se;
    return delta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfigError;
    } catch (const PsdCheckError& e) {
        std::cerr << e.what() << '\n';
        return kExitPsdError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
}

}  // namespace

int cmd_theory(const CliOptions& opt) {
    return guarded([&] {
        LoadedConfig lc = load(opt);
        if (opt.dump_effective_config) return dump_and_exit(lc.cfg);
        const auto& geom = lc.cfg.geometry;

        const Eigen::MatrixXd exact = covariance_matrix(geom);
        std::optional<Eigen::MatrixXd> quad;
        if (opt.with_quadrature)
            quad = covariance_matrix_quadrature(geom, lc.cfg.quadrature.abs_tol,
                                                lc.cfg.quadrature.max_refinements);

        std::vector<TheoryRow> rows;
        for (std::size_t i = 0; i < geom.observables.size(); ++i)
            for (std::size_t j = i; j < geom.observables.size(); ++j) {
                TheoryRow row{i, j, exact(i, j), std::nullopt};
                if (quad) row.quadrature = (*quad)(i, j);
                rows.push_back(row);
            }
        ReportSink sink(lc.out_path);
        write_theory_report(sink.stream(), lc.format, rows);
        return kExitOk;
    });
}

int cmd_simulate(const CliOptions& opt) {
    return guarded([&] {
        LoadedConfig lc = load(opt);
        if (opt.dump_effective_config) return dump_and_exit(lc.cfg);
        const auto& geom = lc.cfg.geometry;
        const McConfig mc = require_mc(lc.cfg);

        const McEstimate est = run(geom, mc);
        const GaussianityReport gauss = gaussianity_report(est);

        std::vector<SimulateRow> rows;
        for (std::size_t i = 0; i < geom.observables.size(); ++i)
            for (std::size_t j = i; j < geom.observables.size(); ++j) {
                SimulateRow row{i, j, est.cov(i, j), est.se_cov(i, j), est.replicas_used,
                                std::nullopt, std::nullopt};
                if (i == j) {
                    row.skew_z = gauss.skew_z(i);
                    row.kurt_z = gauss.kurt_z(i);
                }
                rows.push_back(row);
            }
        ReportSink sink(lc.out_path);
        write_simulate_report(sink.stream(), lc.format, rows);
        return kExitOk;
    });
}

int cmd_compare(const CliOptions& opt) {
    return guarded([&] {
        LoadedConfig lc = load(opt);
        if (opt.dump_effective_config) return dump_and_exit(lc.cfg);
        const auto& geom = lc.cfg.geometry;
        const McConfig mc = require_mc(lc.cfg);

        const Eigen::MatrixXd theory = covariance_matrix(geom);
        const McEstimate est = run(geom, mc);

        bool pass = true;
        std::vector<CompareRow> rows;
        for (std::size_t i = 0; i < geom.observables.size(); ++i)
            for (std::size_t j = i; j < geom.observables.size(); ++j) {
                CompareRow row{i, j, theory(i, j), est.cov(i, j), est.se_cov(i, j), 0.0,
                               std::nullopt};
                row.z = safe_z(row.mc - row.theory, row.se);
                if (row.theory != 0.0) row.rel_err = (row.mc - row.theory) / row.theory;
                pass = pass && std::abs(row.z) <= opt.z_threshold;
                rows.push_back(row);
            }
        ReportSink sink(lc.out_path);
        write_compare_report(sink.stream(), lc.format, rows, opt.z_threshold, pass);
        return pass ? kExitOk : kExitCheckFailed;
    });
}

int cmd_validate(const CliOptions& opt) {
    return guarded([&] {
        LoadedConfig lc = load(opt);
        if (opt.dump_effective_config) return dump_and_exit(lc.cfg);
        const McConfig mc = require_mc(lc.cfg);

        const MomentReport report = validate_moments(lc.cfg.geometry.process,
                                                     lc.cfg.geometry.grid, mc.replicas, mc.seed);
        ReportSink sink(lc.out_path);
        write_validate_report(sink.stream(), lc.format, report);
        return report.all_pass ? kExitOk : kExitCheckFailed;
    });
}

}  // namespace wishart::cli
