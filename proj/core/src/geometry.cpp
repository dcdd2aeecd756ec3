#include "wishart/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wishart {

namespace {

std::int64_t scaled_to_index(double scaled, std::int64_t L) {
    return std::llround(scaled * static_cast<double>(L));
}

}  // namespace

void ExperimentGeometry::validate() const {
    if (L < 1) throw ContractViolation("ExperimentGeometry: L must be >= 1");
    process.validate();
    for (std::size_t i = 0; i < observables.size(); ++i) {
        const auto& o = observables[i];
        const std::string tag = "observable " + std::to_string(i) + ": ";
        if (!(o.mu > 0.0) || !(o.nu > 0.0))
            throw ContractViolation(tag + "mu and nu must be > 0");
        if (o.row_offset < 0.0 || o.col_offset < 0.0)
            throw ContractViolation(tag + "offsets must be >= 0");
        if (o.power < 1) throw ContractViolation(tag + "power must be >= 1");
        if (o.time_index >= grid.size())
            throw ContractViolation(tag + "time_index out of range");
        const auto ext = extent(i);
        if (ext.row_count < 1 || ext.col_count < 1)
            throw ContractViolation(tag + "rounded extent is empty at L = " + std::to_string(L));
    }
}

SubmatrixExtent ExperimentGeometry::extent(std::size_t i) const {
    const auto& o = observables.at(i);
    return {scaled_to_index(o.row_offset, L), scaled_to_index(o.mu, L),
            scaled_to_index(o.col_offset, L), scaled_to_index(o.nu, L)};
}

bool ExperimentGeometry::placement_is_integral(double tol) const {
    auto integral = [&](double scaled) {
        const double x = scaled * static_cast<double>(L);
        return std::abs(x - std::llround(x)) <= tol;
    };
    return std::all_of(observables.begin(), observables.end(), [&](const ObservableSpec& o) {
        return integral(o.row_offset) && integral(o.col_offset) && integral(o.mu) &&
               integral(o.nu);
    });
}

OverlapStats overlap(const ExperimentGeometry& geom, std::size_t i, std::size_t j) {
    if (i >= geom.observables.size() || j >= geom.observables.size())
        throw ContractViolation("overlap: observable index out of range");
    const auto a = geom.extent(i);
    const auto b = geom.extent(j);

    const std::int64_t row_lo = std::max(a.row_begin, b.row_begin);
    const std::int64_t row_hi = std::min(a.row_begin + a.row_count, b.row_begin + b.row_count);
    const std::int64_t col_lo = std::max(a.col_begin, b.col_begin);
    const std::int64_t col_hi = std::min(a.col_begin + a.col_count, b.col_begin + b.col_count);

    OverlapStats st;
    st.m_ij = std::max<std::int64_t>(0, row_hi - row_lo);
    st.n_ij = std::max<std::int64_t>(0, col_hi - col_lo);
    const double Ld = static_cast<double>(geom.L);
    st.mu_ij = static_cast<double>(st.m_ij) / Ld;
    st.nu_ij = static_cast<double>(st.n_ij) / Ld;
    // theta = m_ij n_ij L^2 / (m_i n_i m_j n_j), evaluated at the configured L.
    const double num = static_cast<double>(st.m_ij) * static_cast<double>(st.n_ij) * Ld * Ld;
    const double den = static_cast<double>(a.row_count) * static_cast<double>(a.col_count) *
                       static_cast<double>(b.row_count) * static_cast<double>(b.col_count);
    st.theta = num / den;
    return st;
}

}  // namespace wishart
