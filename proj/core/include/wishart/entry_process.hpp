#pragma once

#include <cstdint>
#include <vector>

#include "wishart/rng.hpp"
#include "wishart/scalar_field.hpp"
#include "wishart/time_grid.hpp"

namespace wishart {

// Built-in entry processes are Gaussian families with stationary standard
// marginals: E Z = 0, E|Z|^2 = 1, E|Z|^4 = 1 + 2/beta at every time.
enum class ProcessFamily {
    GaussianOU,         // c1(s,t) = exp(-rate |t-s|)
    Frozen,             // c1 == 1
    IndependentRefresh  // c1(s,t) = [s == t]
};

struct EntryProcessSpec {
    ScalarField field = ScalarField::Real;
    ProcessFamily family = ProcessFamily::Frozen;
    double rate = 0.0;  // mean-reversion rate per unit time (GaussianOU only)

    void validate() const;
};

// Two-time correlation E[Z(s) conj(Z(t))]; symmetric, c1(t,t) = 1, |c1| <= 1.
double c1(const EntryProcessSpec& spec, double s, double t);

// Two-time intensity correlation E|Z(s)|^2 |Z(t)|^2. For Gaussian families
// the Isserlis identity gives c2 = 1 + (2/beta) c1^2.
double c2(const EntryProcessSpec& spec, double s, double t);

// Per-step AR(1) transition coefficients on a grid, shared by the samplers:
// Z_k = rho_k Z_{k-1} + sqrt(1-rho_k^2) xi_k componentwise.
struct PathCoefficients {
    int components;                  // 1, 2 or 4
    double component_scale;          // 1/sqrt(components), unit total variance
    std::vector<double> rho;         // rho[k] carries step k-1 -> k, rho[0] unused
    std::vector<double> innovation;  // sqrt(1-rho_k^2) * component_scale
};

PathCoefficients path_coefficients(const EntryProcessSpec& spec, const TimeGrid& grid);

// One joint sample (Z(t_1), ..., Z(t_m)) for the entry at (row, col).
std::vector<FieldScalar> sample_entry_path(const EntryProcessSpec& spec, const TimeGrid& grid,
                                           const RandomStream& stream, std::uint32_t row,
                                           std::uint32_t col);

}  // namespace wishart
