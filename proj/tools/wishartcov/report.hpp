#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "wishart/moment_validation.hpp"
#include "wishart/montecarlo.hpp"

namespace wishart::cli {

// All report numbers are serialized with 17 significant digits.
std::string format_number(double v);

struct TheoryRow {
    std::size_t i, j;
    double exact;
    std::optional<double> quadrature;  // set when the cross-check was requested
};

struct SimulateRow {
    std::size_t i, j;
    double cov, se;
    std::uint64_t replicas;
    std::optional<double> skew_z, kurt_z;  // diagonal rows only
};

struct CompareRow {
    std::size_t i, j;
    double theory, mc, se, z;
    std::optional<double> rel_err;  // unset when theory == 0
};

void write_theory_report(std::ostream& out, OutputFormat format,
                         const std::vector<TheoryRow>& rows);
void write_simulate_report(std::ostream& out, OutputFormat format,
                           const std::vector<SimulateRow>& rows);
void write_compare_report(std::ostream& out, OutputFormat format,
                          const std::vector<CompareRow>& rows, double z_threshold, bool pass);
void write_validate_report(std::ostream& out, OutputFormat format, const MomentReport& report);

}  // namespace wishart::cli
