#pragma once

#include <Eigen/Dense>

#include "wishart/geometry.hpp"
#include "wishart/scalar_field.hpp"

namespace wishart {

// Full argument list of the limiting covariance formula for one pair of
// observables Tr(W_i^{p_i}(s_i)), Tr(W_j^{p_j}(s_j)).
struct CovarianceParams {
    int p_i = 1, p_j = 1;
    double mu_i = 1.0, nu_i = 1.0;
    double mu_j = 1.0, nu_j = 1.0;
    double theta = 0.0;
    ScalarField field = ScalarField::Real;
    double c1 = 1.0;
    double c2 = 3.0;

    void validate() const;
};

// Coefficient of the error term: c2 - 1 - (2/beta) c1. Zero at equal time
// for Gaussian-family moments, non-positive whenever c2 <= 1 + (2/beta) c1.
double error_coefficient(const CovarianceParams& p);

// --- Route 1: direct 2-D quadrature over semicircular contours ------------
//
// After the polar substitution zeta = r e^{i phi}, phi in (0, pi), the two
// double contour integrals become manifestly real:
//
//   Cov = (4 c1 p_i p_j)/(beta pi^2) * Int Int F_i F_j
//           * log| (1 - a e^{i(phi_i+phi_j)}) / (1 - a e^{i(phi_i-phi_j)}) |
//           * r_i r_j sin(phi_i) sin(phi_j) dphi_i dphi_j
//       + (4 C theta p_i p_j)/pi^2 * I(p_i,A_i,r_i) * I(p_j,A_j,r_j),
//
// with r_k = sqrt(mu_k nu_k), A_k = mu_k + nu_k, a = theta r_i r_j,
// F_k = (A_k + 2 r_k cos phi_k)^{p_k - 1}, C = c2 - 1 - (2/beta) c1 and
// I(p,A,r) = r^2 Int_0^pi sin^2(phi) (A + 2 r cos phi)^{p-1} dphi.
// The log kernel has an integrable singularity on phi_i = phi_j when a = 1
// (self-overlap and full containment); panels are split toward it.
//
// Throws NumericalFailure when the refinement budget is exhausted before
// the error estimate reaches abs_tol. theta = 0 short-circuits to 0.
double covariance_quadrature(const CovarianceParams& params, double abs_tol,
                             int max_panels = 20000);

// --- Route 2: exact finite residue sum ------------------------------------
//
// Integrating the main term by parts moves the contours to full circles with
// kernel (theta^{-1} - zeta_i zeta_j)^{-2}; expanding that kernel in a Taylor
// series and taking residues leaves the finite sum
//
//   Main  = (2 c1 theta / beta) * Sum_{k=0}^{min(p_i,p_j)-1} (k+1) theta^k
//             * C_k(p_i, A_i, r_i) * C_k(p_j, A_j, r_j),
//   Error = (4 C theta p_i p_j / pi^2) * I(p_i,A_i,r_i) * I(p_j,A_j,r_j),
//
// where C_k(p, A, r) is the coefficient of zeta^{-1-k} in (A + zeta +
// r^2/zeta)^p (zero for k >= p, so the series terminates) and I is evaluated
// in closed form through Wallis integrals. The overall sign is fixed by
// agreement with the p_i = p_j = 1 closed form and by non-negative
// self-covariance.
double covariance_exact(const CovarianceParams& params);
double exact_main_term(const CovarianceParams& params);
double exact_error_term(const CovarianceParams& params);

// Printed closed forms for p_i = p_j = 1 and p_i = p_j = 2; equal to
// covariance_exact on their domain. Wrong powers are a contract violation.
double covariance_closed_form_p1(const CovarianceParams& params);
double covariance_closed_form_p2(const CovarianceParams& params);

// C_k(p, A, r): coefficient of zeta^{-1-k} in (A + zeta + r^2/zeta)^p,
// by exact multinomial sums (r enters through r2 = r^2). Requires p <= 32.
double laurent_coefficient(int p, int k, double A, double r2);

// I(p, A, r) = r^2 Int_0^pi sin^2(phi) (A + 2 r cos phi)^{p-1} dphi in
// closed form; odd cosine powers vanish, even ones are Wallis integrals.
double sin2_power_integral(int p, double A, double r2);

// Parameters of the pair (i, j) at the geometry's configured scale: actual
// rounded dimension ratios, exact integer overlap, c1/c2 at the two times.
CovarianceParams pair_params(const ExperimentGeometry& geom, std::size_t i, std::size_t j);

// k x k limiting covariance matrix via covariance_exact; symmetric by
// construction and PSD-checked (failure throws PsdCheckError, not repaired).
Eigen::MatrixXd covariance_matrix(const ExperimentGeometry& geom);

// Same matrix through the quadrature route (cross-validation; no PSD check).
Eigen::MatrixXd covariance_matrix_quadrature(const ExperimentGeometry& geom, double abs_tol,
                                             int max_panels = 20000);

// Throws PsdCheckError when the smallest eigenvalue is below
// -tol * max(1, largest eigenvalue).
void check_psd(const Eigen::MatrixXd& m, double tol = 1e-8);

}  // namespace wishart
