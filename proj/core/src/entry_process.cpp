#include "wishart/entry_process.hpp"

#include <cmath>

namespace wishart {

void EntryProcessSpec::validate() const {
    if (field != ScalarField::Real && field != ScalarField::Complex &&
        field != ScalarField::Quaternion)
        throw ContractViolation("EntryProcessSpec: field must have beta in {1,2,4}");
    if (family == ProcessFamily::GaussianOU && !(rate > 0.0))
        throw ContractViolation("EntryProcessSpec: GaussianOU needs rate > 0");
}

double c1(const EntryProcessSpec& spec, double s, double t) {
    if (s < 0.0 || t < 0.0) throw ContractViolation("c1: times must be >= 0");
    switch (spec.family) {
        case ProcessFamily::GaussianOU: return std::exp(-spec.rate * std::abs(t - s));
        case ProcessFamily::Frozen: return 1.0;
        case ProcessFamily::IndependentRefresh: return s == t ? 1.0 : 0.0;
    }
    throw ContractViolation("c1: unknown family");
}

double c2(const EntryProcessSpec& spec, double s, double t) {
    const double r = c1(spec, s, t);
    return 1.0 + (2.0 / beta_of(spec.field)) * r * r;
}

PathCoefficients path_coefficients(const EntryProcessSpec& spec, const TimeGrid& grid) {
    spec.validate();
    PathCoefficients pc;
    pc.components = component_count(spec.field);
    pc.component_scale = 1.0 / std::sqrt(static_cast<double>(pc.components));
    pc.rho.assign(grid.size(), 0.0);
    pc.innovation.assign(grid.size(), 0.0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        double rho = 0.0;
        switch (spec.family) {
            case ProcessFamily::GaussianOU:
                rho = std::exp(-spec.rate * (grid[k] - grid[k - 1]));
                break;
            case ProcessFamily::Frozen: rho = 1.0; break;
            case ProcessFamily::IndependentRefresh: rho = 0.0; break;
        }
        pc.rho[k] = rho;
        pc.innovation[k] = std::sqrt(std::max(0.0, 1.0 - rho * rho)) * pc.component_scale;
    }
    return pc;
}

std::vector<FieldScalar> sample_entry_path(const EntryProcessSpec& spec, const TimeGrid& grid,
                                           const RandomStream& stream, std::uint32_t row,
                                           std::uint32_t col) {
    const PathCoefficients pc = path_coefficients(spec, grid);
    std::vector<FieldScalar> path(grid.size());
    for (int comp = 0; comp < pc.components; ++comp) {
        NormalWalker walker(stream, row, col, static_cast<std::uint32_t>(comp));
        double x = pc.component_scale * walker.at(0);
        path[0].c[comp] = x;
        for (std::size_t k = 1; k < grid.size(); ++k) {
            x = pc.rho[k] * x + pc.innovation[k] * walker.at(static_cast<std::uint32_t>(k));
            path[k].c[comp] = x;
        }
    }
    return path;
}

}  // namespace wishart
