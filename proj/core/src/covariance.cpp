#include "wishart/covariance.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "wishart/errors.hpp"
#include "wishart/quadrature.hpp"

namespace wishart {

namespace {

constexpr double kPi = 3.141592653589793238462643383280;

double ipow(double x, int n) {
    double acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= x;
    return acc;
}

std::uint64_t binomial_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * static_cast<std::uint64_t>(n - k + i) / i;
    return acc;
}

// p! / (a! b! c!) with a + b + c = p; exact in 64 bits for p <= 32.
double multinomial(int p, int a, int b) {
    return static_cast<double>(binomial_u64(p, a) * binomial_u64(p - a, b));
}

struct PairGeometry {
    double beta;
    double A_i, r_i, r2_i;
    double A_j, r_j, r2_j;
};

PairGeometry derive(const CovarianceParams& p) {
    PairGeometry g;
    g.beta = beta_of(p.field);
    g.r2_i = p.mu_i * p.nu_i;
    g.r2_j = p.mu_j * p.nu_j;
    g.r_i = std::sqrt(g.r2_i);
    g.r_j = std::sqrt(g.r2_j);
    g.A_i = p.mu_i + p.nu_i;
    g.A_j = p.mu_j + p.nu_j;
    return g;
}

}  // namespace

void CovarianceParams::validate() const {
    if (p_i < 1 || p_j < 1) throw ContractViolation("CovarianceParams: powers must be >= 1");
    if (p_i > 32 || p_j > 32)
        throw ContractViolation("CovarianceParams: powers above 32 exceed the exact 64-bit "
                                "multinomial range");
    if (!(mu_i > 0.0) || !(nu_i > 0.0) || !(mu_j > 0.0) || !(nu_j > 0.0))
        throw ContractViolation("CovarianceParams: mu, nu must be > 0");
    if (!(theta >= 0.0)) throw ContractViolation("CovarianceParams: theta must be >= 0");
    const double reach = theta * std::sqrt(mu_i * nu_i * mu_j * nu_j);
    if (reach > 1.0 + 1e-12)
        throw ContractViolation("CovarianceParams: theta * sqrt(mu_i nu_i mu_j nu_j) = " +
                                std::to_string(reach) + " > 1 puts the kernel singularity "
                                "inside the contour torus");
    if (std::abs(c1) > 1.0 + 1e-12)
        throw ContractViolation("CovarianceParams: |c1| must be <= 1");
    const double c2_max = 1.0 + 2.0 / beta_of(field);
    if (c2 < 1.0 - 1e-12 || c2 > c2_max + 1e-12)
        throw ContractViolation("CovarianceParams: c2 must lie in [1, 1 + 2/beta]");
}

double error_coefficient(const CovarianceParams& p) {
    return p.c2 - 1.0 - (2.0 / beta_of(p.field)) * p.c1;
}

double laurent_coefficient(int p, int k, double A, double r2) {
    if (p < 1 || p > 32) throw ContractViolation("laurent_coefficient: p must be in [1, 32]");
    if (k < 0) throw ContractViolation("laurent_coefficient: k must be >= 0");
    // (A + zeta + r2/zeta)^p = sum_{a+b+c=p} p!/(a!b!c!) A^a zeta^{b-c} r2^c;
    // zeta^{-1-k} forces c = b + k + 1.
    double acc = 0.0;
    for (int b = 0;; ++b) {
        const int c = b + k + 1;
        const int a = p - b - c;
        if (a < 0) break;
        acc += multinomial(p, a, b) * ipow(A, a) * ipow(r2, c);
    }
    return acc;
}

double sin2_power_integral(int p, double A, double r2) {
    if (p < 1 || p > 32) throw ContractViolation("sin2_power_integral: p must be in [1, 32]");
    // Int_0^pi sin^2 cos^{2n} = pi binom(2n,n) / (4^n (2n+2)); odd powers vanish,
    // and the 4^n cancels against (2r)^{2n}.
    double acc = 0.0;
    for (int n = 0; 2 * n <= p - 1; ++n) {
        const double coeff = static_cast<double>(binomial_u64(p - 1, 2 * n)) *
                             static_cast<double>(binomial_u64(2 * n, n)) / (2.0 * n + 2.0);
        acc += coeff * ipow(A, p - 1 - 2 * n) * ipow(r2, n);
    }
    return kPi * r2 * acc;
}

double exact_main_term(const CovarianceParams& p) {
    p.validate();
    if (p.theta == 0.0 || p.c1 == 0.0) return 0.0;
    const PairGeometry g = derive(p);
    double sum = 0.0;
    double theta_k = 1.0;
    const int kmax = std::min(p.p_i, p.p_j) - 1;
    for (int k = 0; k <= kmax; ++k) {
        // the coefficient pair is grouped so the value is symmetric in i <-> j
        const double pair = laurent_coefficient(p.p_i, k, g.A_i, g.r2_i) *
                            laurent_coefficient(p.p_j, k, g.A_j, g.r2_j);
        sum += (k + 1) * theta_k * pair;
        theta_k *= p.theta;
    }
    return (2.0 * p.c1 * p.theta / g.beta) * sum;
}

double exact_error_term(const CovarianceParams& p) {
    p.validate();
    const double C = error_coefficient(p);
    if (p.theta == 0.0 || C == 0.0) return 0.0;
    const PairGeometry g = derive(p);
    const double pair = sin2_power_integral(p.p_i, g.A_i, g.r2_i) *
                        sin2_power_integral(p.p_j, g.A_j, g.r2_j);
    return (4.0 * C * p.theta * (p.p_i * p.p_j) / (kPi * kPi)) * pair;
}

double covariance_exact(const CovarianceParams& p) {
    return exact_main_term(p) + exact_error_term(p);
}

double covariance_quadrature(const CovarianceParams& p, double abs_tol, int max_panels) {
    p.validate();
    if (!(abs_tol > 0.0)) throw ContractViolation("covariance_quadrature: abs_tol must be > 0");
    if (p.theta == 0.0) return 0.0;

    const PairGeometry g = derive(p);
    const double a = p.theta * g.r_i * g.r_j;
    double result = 0.0;

    if (p.c1 != 0.0) {
        const double pref = 4.0 * p.c1 * p.p_i * p.p_j * g.r_i * g.r_j / (g.beta * kPi * kPi);
        const double raw_tol = 0.9 * abs_tol / std::abs(pref);
        const double outer_tol = 0.5 * raw_tol;
        const double inner_tol = 0.5 * raw_tol / kPi;

        // log|1 - a e^{i psi}|^2 = log((1-a)^2 + 4 a sin^2(psi/2)); the
        // stable form keeps the a -> 1 singularity out of the subtraction.
        const double one_minus_a_sq = (1.0 - a) * (1.0 - a);
        const auto log_mod2 = [&](double psi) {
            const double s = std::sin(0.5 * psi);
            const double arg = one_minus_a_sq + 4.0 * a * s * s;
            return std::log(std::max(arg, std::numeric_limits<double>::min()));
        };

        const auto outer = [&](double phi_i) {
            const double F_i = ipow(g.A_i + 2.0 * g.r_i * std::cos(phi_i), p.p_i - 1);
            const double split[1] = {phi_i};
            const auto inner = [&](double phi_j) {
                const double F_j = ipow(g.A_j + 2.0 * g.r_j * std::cos(phi_j), p.p_j - 1);
                const double kernel =
                    0.5 * (log_mod2(phi_i + phi_j) - log_mod2(phi_i - phi_j));
                return F_j * std::sin(phi_j) * kernel;
            };
            const double inner_val =
                integrate_adaptive(inner, 0.0, kPi, inner_tol, max_panels, split);
            return F_i * std::sin(phi_i) * inner_val;
        };
        result += pref * integrate_adaptive(outer, 0.0, kPi, outer_tol, max_panels);
    }

    const double C = error_coefficient(p);
    if (C != 0.0) {
        const double pref = 4.0 * C * p.theta * p.p_i * p.p_j / (kPi * kPi);
        const auto factor = [&](double A, double r, int pw, double tol) {
            const auto f = [&](double phi) {
                const double s = std::sin(phi);
                return s * s * ipow(A + 2.0 * r * std::cos(phi), pw - 1);
            };
            return r * r * integrate_adaptive(f, 0.0, kPi, tol, max_panels);
        };
        const double bound_i = kPi * g.r2_i * std::max(1.0, ipow(g.A_i + 2.0 * g.r_i, p.p_i - 1));
        const double bound_j = kPi * g.r2_j * std::max(1.0, ipow(g.A_j + 2.0 * g.r_j, p.p_j - 1));
        const double tol_i =
            std::max(1e-15 * bound_i, 0.025 * abs_tol / (std::abs(pref) * (bound_j + 1.0)));
        const double tol_j =
            std::max(1e-15 * bound_j, 0.025 * abs_tol / (std::abs(pref) * (bound_i + 1.0)));
        result += pref * factor(g.A_i, g.r_i, p.p_i, tol_i / g.r2_i) *
                  factor(g.A_j, g.r_j, p.p_j, tol_j / g.r2_j);
    }
    return result;
}

double covariance_closed_form_p1(const CovarianceParams& p) {
    p.validate();
    if (p.p_i != 1 || p.p_j != 1)
        throw ContractViolation("covariance_closed_form_p1: requires p_i = p_j = 1");
    const double beta = beta_of(p.field);
    const double M = p.mu_i * p.nu_i * p.mu_j * p.nu_j;
    return 2.0 * p.c1 * p.theta * M / beta + p.theta * M * error_coefficient(p);
}

double covariance_closed_form_p2(const CovarianceParams& p) {
    p.validate();
    if (p.p_i != 2 || p.p_j != 2)
        throw ContractViolation("covariance_closed_form_p2: requires p_i = p_j = 2");
    const double beta = beta_of(p.field);
    const double M = p.mu_i * p.nu_i * p.mu_j * p.nu_j;
    const double cross = 4.0 * (p.mu_i + p.nu_i) * (p.mu_j + p.nu_j);
    return 2.0 * p.c1 * p.theta * M * (cross + 2.0 * p.theta * M) / beta +
           error_coefficient(p) * p.theta * M * cross;
}

CovarianceParams pair_params(const ExperimentGeometry& geom, std::size_t i, std::size_t j) {
    const auto ei = geom.extent(i);
    const auto ej = geom.extent(j);
    const double L = static_cast<double>(geom.L);
    CovarianceParams p;
    p.p_i = geom.observables[i].power;
    p.p_j = geom.observables[j].power;
    p.mu_i = static_cast<double>(ei.row_count) / L;
    p.nu_i = static_cast<double>(ei.col_count) / L;
    p.mu_j = static_cast<double>(ej.row_count) / L;
    p.nu_j = static_cast<double>(ej.col_count) / L;
    p.theta = overlap(geom, i, j).theta;
    p.field = geom.process.field;
    const double s_i = geom.grid[geom.observables[i].time_index];
    const double s_j = geom.grid[geom.observables[j].time_index];
    p.c1 = c1(geom.process, s_i, s_j);
    p.c2 = c2(geom.process, s_i, s_j);
    return p;
}

void check_psd(const Eigen::MatrixXd& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("check_psd: eigenvalue computation failed");
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    if (lo < -tol * std::max(1.0, hi))
        throw PsdCheckError("covariance matrix is not positive semi-definite: offending "
                            "eigenvalue " + std::to_string(lo), lo);
}

Eigen::MatrixXd covariance_matrix(const ExperimentGeometry& geom) {
    geom.validate();
    const auto k = static_cast<Eigen::Index>(geom.observables.size());
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j)
            m(i, j) = m(j, i) = covariance_exact(pair_params(geom, i, j));
    check_psd(m, 1e-8);
    return m;
}

Eigen::MatrixXd covariance_matrix_quadrature(const ExperimentGeometry& geom, double abs_tol,
                                             int max_panels) {
    geom.validate();
    const auto k = static_cast<Eigen::Index>(geom.observables.size());
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j)
            m(i, j) = m(j, i) =
                covariance_quadrature(pair_params(geom, i, j), abs_tol, max_panels);
    return m;
}

}  // namespace wishart
