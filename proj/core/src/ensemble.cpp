#include "wishart/ensemble.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>

namespace wishart {

namespace {

using std::complex;

// Atom of the rectangle arrangement: a cell is either fully inside or fully
// outside every submatrix, so coverage is decided once per cell.
struct CellCover {
    std::size_t obs;
    std::uint32_t step;
    std::int64_t row_begin, col_begin;  // submatrix origin, for local indices
};

struct Cell {
    std::int64_t r0, r1, c0, c1;
    std::vector<CellCover> covers;
    std::uint32_t max_step = 0;
};

std::vector<std::int64_t> cuts_of(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<Cell> decompose(const ExperimentGeometry& geom,
                            const std::vector<std::size_t>& which) {
    std::vector<std::int64_t> row_cuts, col_cuts;
    std::vector<SubmatrixExtent> ext(geom.observables.size());
    for (std::size_t i : which) {
        ext[i] = geom.extent(i);
        row_cuts.push_back(ext[i].row_begin);
        row_cuts.push_back(ext[i].row_begin + ext[i].row_count);
        col_cuts.push_back(ext[i].col_begin);
        col_cuts.push_back(ext[i].col_begin + ext[i].col_count);
    }
    row_cuts = cuts_of(std::move(row_cuts));
    col_cuts = cuts_of(std::move(col_cuts));

    std::vector<Cell> cells;
    for (std::size_t a = 0; a + 1 < row_cuts.size(); ++a) {
        for (std::size_t b = 0; b + 1 < col_cuts.size(); ++b) {
            Cell cell{row_cuts[a], row_cuts[a + 1], col_cuts[b], col_cuts[b + 1], {}, 0};
            for (std::size_t i : which) {
                const auto& e = ext[i];
                const bool inside = e.row_begin <= cell.r0 &&
                                    cell.r1 <= e.row_begin + e.row_count &&
                                    e.col_begin <= cell.c0 &&
                                    cell.c1 <= e.col_begin + e.col_count;
                if (!inside) continue;
                const auto step =
                    static_cast<std::uint32_t>(geom.observables[i].time_index);
                cell.covers.push_back({i, step, e.row_begin, e.col_begin});
                cell.max_step = std::max(cell.max_step, step);
            }
            if (!cell.covers.empty()) cells.push_back(std::move(cell));
        }
    }
    return cells;
}

// Walks every covered entry of the arrangement once, hands the component
// path values at each cover's step to `write(cover, local_r, local_c, comps)`.
template <class WriteFn>
void generate_entries(const ExperimentGeometry& geom, const std::vector<std::size_t>& which,
                      const RandomStream& stream, WriteFn&& write) {
    const PathCoefficients pc = path_coefficients(geom.process, geom.grid);
    const auto cells = decompose(geom, which);

    // path[comp][step]
    std::array<std::vector<double>, 4> path;

    for (const auto& cell : cells) {
        const std::uint32_t kmax = cell.max_step;
        for (int comp = 0; comp < pc.components; ++comp) path[comp].resize(kmax + 1);

        for (std::int64_t c = cell.c0; c < cell.c1; ++c) {
            for (std::int64_t r = cell.r0; r < cell.r1; ++r) {
                for (int comp = 0; comp < pc.components; ++comp) {
                    NormalWalker walker(stream, static_cast<std::uint32_t>(r),
                                        static_cast<std::uint32_t>(c),
                                        static_cast<std::uint32_t>(comp));
                    double x = pc.component_scale * walker.at(0);
                    path[comp][0] = x;
                    for (std::uint32_t k = 1; k <= kmax; ++k) {
                        x = pc.rho[k] * x + pc.innovation[k] * walker.at(k);
                        path[comp][k] = x;
                    }
                }
                for (const auto& cov : cell.covers) {
                    std::array<double, 4> comps{0.0, 0.0, 0.0, 0.0};
                    for (int comp = 0; comp < pc.components; ++comp)
                        comps[comp] = path[comp][cov.step];
                    write(cov, r - cov.row_begin, c - cov.col_begin, comps);
                }
            }
        }
    }
}

RealMatrix wishart_real(const RealMatrix& B, double L) {
    RealMatrix W = RealMatrix::Zero(B.cols(), B.cols());
    W.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose(), 1.0 / L);
    W.triangularView<Eigen::StrictlyUpper>() = W.transpose();
    return W;
}

ComplexMatrix wishart_complex(const ComplexMatrix& B, double L) {
    ComplexMatrix W = ComplexMatrix::Zero(B.cols(), B.cols());
    W.selfadjointView<Eigen::Lower>().rankUpdate(B.adjoint(), 1.0 / L);
    W.triangularView<Eigen::StrictlyUpper>() = W.adjoint();
    return W;
}

template <class MatrixT>
double trace_power_impl(const MatrixT& W, int p) {
    if (W.rows() != W.cols()) throw ContractViolation("trace_power: matrix must be square");
    if (p < 1) throw ContractViolation("trace_power: p must be >= 1");
    if (p == 1) return std::real(W.trace());
    if (p == 2) return W.squaredNorm();  // Tr(W^2) = |W|_F^2 for Hermitian W
    MatrixT P = W * W;
    for (int k = 3; k < p; ++k) P = P * W;
    // Tr(P W) without forming the last product.
    return std::real(P.cwiseProduct(W.transpose()).sum());
}

template <class MatrixT>
double wishart_trace_power(const MatrixT& B, double L, int p) {
    if (p == 1) return B.squaredNorm() / L;  // Tr(B^* B)/L
    if constexpr (std::is_same_v<MatrixT, RealMatrix>)
        return trace_power_impl(wishart_real(B, L), p);
    else
        return trace_power_impl(wishart_complex(B, L), p);
}

}  // namespace

double trace_power(const RealMatrix& W, int p) { return trace_power_impl(W, p); }
double trace_power(const ComplexMatrix& W, int p) { return trace_power_impl(W, p); }

RealMatrix assemble_submatrix_real(const ExperimentGeometry& geom, std::size_t i,
                                   const RandomStream& stream) {
    geom.validate();
    if (geom.process.field != ScalarField::Real)
        throw ContractViolation("assemble_submatrix_real: field is not real");
    const auto e = geom.extent(i);
    RealMatrix B(e.row_count, e.col_count);
    generate_entries(geom, {i}, stream,
                     [&](const CellCover&, std::int64_t r, std::int64_t c,
                         const std::array<double, 4>& v) { B(r, c) = v[0]; });
    return B;
}

ComplexMatrix assemble_submatrix_complex(const ExperimentGeometry& geom, std::size_t i,
                                         const RandomStream& stream) {
    geom.validate();
    const auto e = geom.extent(i);
    if (geom.process.field == ScalarField::Complex) {
        ComplexMatrix B(e.row_count, e.col_count);
        generate_entries(geom, {i}, stream,
                         [&](const CellCover&, std::int64_t r, std::int64_t c,
                             const std::array<double, 4>& v) { B(r, c) = {v[0], v[1]}; });
        return B;
    }
    if (geom.process.field == ScalarField::Quaternion) {
        ComplexMatrix B(2 * e.row_count, 2 * e.col_count);
        generate_entries(geom, {i}, stream,
                         [&](const CellCover&, std::int64_t r, std::int64_t c,
                             const std::array<double, 4>& v) {
                             const complex<double> z{v[0], v[1]}, w{v[2], v[3]};
                             B(2 * r, 2 * c) = z;
                             B(2 * r, 2 * c + 1) = w;
                             B(2 * r + 1, 2 * c) = -std::conj(w);
                             B(2 * r + 1, 2 * c + 1) = std::conj(z);
                         });
        return B;
    }
    throw ContractViolation("assemble_submatrix_complex: field is real");
}

std::vector<double> sample_replica(const ExperimentGeometry& geom, const RandomStream& stream) {
    geom.validate();
    const std::size_t k = geom.observables.size();
    std::vector<std::size_t> all(k);
    for (std::size_t i = 0; i < k; ++i) all[i] = i;

    const double L = static_cast<double>(geom.L);
    std::vector<double> values(k, 0.0);

    switch (geom.process.field) {
        case ScalarField::Real: {
            std::vector<RealMatrix> B(k);
            for (std::size_t i = 0; i < k; ++i) {
                const auto e = geom.extent(i);
                B[i].resize(e.row_count, e.col_count);
            }
            generate_entries(geom, all, stream,
                             [&](const CellCover& cov, std::int64_t r, std::int64_t c,
                                 const std::array<double, 4>& v) { B[cov.obs](r, c) = v[0]; });
            for (std::size_t i = 0; i < k; ++i)
                values[i] = wishart_trace_power(B[i], L, geom.observables[i].power);
            break;
        }
        case ScalarField::Complex: {
            std::vector<ComplexMatrix> B(k);
            for (std::size_t i = 0; i < k; ++i) {
                const auto e = geom.extent(i);
                B[i].resize(e.row_count, e.col_count);
            }
            generate_entries(geom, all, stream,
                             [&](const CellCover& cov, std::int64_t r, std::int64_t c,
                                 const std::array<double, 4>& v) {
                                 B[cov.obs](r, c) = {v[0], v[1]};
                             });
            for (std::size_t i = 0; i < k; ++i)
                values[i] = wishart_trace_power(B[i], L, geom.observables[i].power);
            break;
        }
        case ScalarField::Quaternion: {
            std::vector<ComplexMatrix> B(k);
            for (std::size_t i = 0; i < k; ++i) {
                const auto e = geom.extent(i);
                B[i].resize(2 * e.row_count, 2 * e.col_count);
            }
            generate_entries(geom, all, stream,
                             [&](const CellCover& cov, std::int64_t r, std::int64_t c,
                                 const std::array<double, 4>& v) {
                                 const complex<double> z{v[0], v[1]}, w{v[2], v[3]};
                                 auto& Bm = B[cov.obs];
                                 Bm(2 * r, 2 * c) = z;
                                 Bm(2 * r, 2 * c + 1) = w;
                                 Bm(2 * r + 1, 2 * c) = -std::conj(w);
                                 Bm(2 * r + 1, 2 * c + 1) = std::conj(z);
                             });
            // Quaternionic trace = half the trace of the complex embedding.
            for (std::size_t i = 0; i < k; ++i)
                values[i] = 0.5 * wishart_trace_power(B[i], L, geom.observables[i].power);
            break;
        }
    }
    return values;
}

}  // namespace wishart
