#pragma once

#include <cstdint>
#include <vector>

#include "wishart/entry_process.hpp"
#include "wishart/time_grid.hpp"

namespace wishart {

// One observable Tr(W^p(s)) of a submatrix placed on the virtual array.
// Placement and extent are given in units of the array scale L, so a single
// description serves an L-sweep.
struct ObservableSpec {
    double row_offset = 0.0;  // scaled, >= 0
    double col_offset = 0.0;  // scaled, >= 0
    double mu = 1.0;          // scaled row count, > 0
    double nu = 1.0;          // scaled column count, > 0
    int power = 1;            // trace power p, >= 1
    std::size_t time_index = 0;
};

// Integer placement of an observable at a concrete scale L.
struct SubmatrixExtent {
    std::int64_t row_begin, row_count;
    std::int64_t col_begin, col_count;
};

struct ExperimentGeometry {
    std::int64_t L = 1;
    TimeGrid grid{std::vector<double>{0.0}};
    std::vector<ObservableSpec> observables;
    EntryProcessSpec process;

    // Throws ContractViolation on invalid scale, placement or powers.
    void validate() const;

    SubmatrixExtent extent(std::size_t i) const;

    // True when every scaled offset/extent lands exactly on the integer
    // lattice at this L (so rounding is a no-op).
    bool placement_is_integral(double tol = 1e-9) const;
};

// Shared rows/columns of a pair of submatrices and the scaled overlap
// parameter theta = m_ij n_ij L^2 / (m_i n_i m_j n_j).
struct OverlapStats {
    std::int64_t m_ij = 0;
    std::int64_t n_ij = 0;
    double mu_ij = 0.0;
    double nu_ij = 0.0;
    double theta = 0.0;
};

OverlapStats overlap(const ExperimentGeometry& geom, std::size_t i, std::size_t j);

}  // namespace wishart
