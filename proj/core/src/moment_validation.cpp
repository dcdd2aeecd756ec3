#include "wishart/moment_validation.hpp"

#include <cmath>
#include <limits>

namespace wishart {

namespace {

// Streaming mean/SE of one empirical moment.
struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    void add(double x) {
        sum += x;
        sum_sq += x * x;
    }
    double mean(double n) const { return sum / n; }
    double se(double n) const {
        const double var = (sum_sq - sum * sum / n) / (n - 1.0);
        return std::sqrt(std::max(0.0, var) / n);
    }
};

MomentCheck make_check(std::string name, double s, double t, const Moments& m, double n,
                       double target) {
    MomentCheck check;
    check.name = std::move(name);
    check.s = s;
    check.t = t;
    check.estimate = m.mean(n);
    check.target = target;
    check.se = m.se(n);
    if (check.se > 0.0)
        check.z = (check.estimate - target) / check.se;
    else
        check.z = check.estimate == target ? 0.0
                                           : std::numeric_limits<double>::infinity();
    check.pass = std::abs(check.z) <= 4.0;
    return check;
}

}  // namespace

MomentReport validate_moments(const EntryProcessSpec& spec, const TimeGrid& grid,
                              std::uint64_t draws, std::uint64_t seed) {
    spec.validate();
    if (draws < 10000) throw ContractViolation("validate_moments: draws must be >= 10^4");

    const int ncomp = component_count(spec.field);
    const std::size_t m = grid.size();
    const std::size_t npairs = m * (m - 1) / 2;

    std::vector<Moments> comp_mean(m * ncomp);
    std::vector<Moments> abs2(m), abs4(m);
    std::vector<Moments> pair_c1(npairs), pair_c2(npairs);

    for (std::uint64_t d = 0; d < draws; ++d) {
        const auto path = sample_entry_path(spec, grid, RandomStream{seed, d}, 0, 0);
        for (std::size_t k = 0; k < m; ++k) {
            const double n2 = path[k].norm2();
            abs2[k].add(n2);
            abs4[k].add(n2 * n2);
            for (int c = 0; c < ncomp; ++c) comp_mean[k * ncomp + c].add(path[k].c[c]);
        }
        std::size_t pair = 0;
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = k + 1; l < m; ++l, ++pair) {
                pair_c1[pair].add(scalar_part_conj_product(path[k], path[l]));
                pair_c2[pair].add(path[k].norm2() * path[l].norm2());
            }
    }

    const double n = static_cast<double>(draws);
    const double beta = beta_of(spec.field);

    MomentReport report;
    report.draws = draws;
    for (std::size_t k = 0; k < m; ++k) {
        const double t = grid[k];
        for (int c = 0; c < ncomp; ++c)
            report.checks.push_back(make_check("E Z (component " + std::to_string(c) + ")", t,
                                               t, comp_mean[k * ncomp + c], n, 0.0));
        report.checks.push_back(make_check("E |Z|^2", t, t, abs2[k], n, 1.0));
        report.checks.push_back(make_check("E |Z|^4", t, t, abs4[k], n, 1.0 + 2.0 / beta));
    }
    std::size_t pair = 0;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k + 1; l < m; ++l, ++pair) {
            const double s = grid[k], t = grid[l];
            report.checks.push_back(
                make_check("c1", s, t, pair_c1[pair], n, c1(spec, s, t)));
            report.checks.push_back(
                make_check("c2", s, t, pair_c2[pair], n, c2(spec, s, t)));
        }

    for (const auto& check : report.checks) report.all_pass = report.all_pass && check.pass;
    return report;
}

}  // namespace wishart
