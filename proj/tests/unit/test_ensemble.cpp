#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wishart/ensemble.hpp"
#include "wishart/montecarlo.hpp"

using namespace wishart;

namespace {

const double kLn2 = std::log(2.0);

ExperimentGeometry basic_geometry(std::int64_t L, ScalarField field,
                                  std::vector<ObservableSpec> obs,
                                  std::vector<double> times = {0.0, 1.0}) {
    ExperimentGeometry g;
    g.L = L;
    g.grid = TimeGrid(std::move(times));
    g.observables = std::move(obs);
    g.process = {field, ProcessFamily::GaussianOU, kLn2};
    return g;
}

oracles::Dense<double> to_dense(const RealMatrix& m) {
    oracles::Dense<double> out(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

oracles::Dense<std::complex<double>> to_dense(const ComplexMatrix& m) {
    oracles::Dense<std::complex<double>> out(m.rows(),
                                             std::vector<std::complex<double>>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

}  // namespace

TEST_CASE("trace_power on fixed matrices") {
    RealMatrix id = RealMatrix::Identity(9, 9);
    for (int p : {1, 2, 5}) CHECK(trace_power(id, p) == doctest::Approx(9.0).epsilon(1e-15));

    RealMatrix d = RealMatrix::Zero(3, 3);
    d.diagonal() << 1.0, 2.0, 3.0;
    CHECK(trace_power(d, 3) == doctest::Approx(36.0).epsilon(1e-15));

    const RealMatrix rect = RealMatrix::Zero(2, 3);
    CHECK_THROWS_AS(trace_power(rect, 1), ContractViolation);
    CHECK_THROWS_AS(trace_power(id, 0), ContractViolation);
}

TEST_CASE("trace_power agrees with the eigenvalue oracle") {
    std::mt19937 rng(1234);
    std::normal_distribution<double> gauss;
    RealMatrix g(10, 10);
    for (Eigen::Index i = 0; i < 10; ++i)
        for (Eigen::Index j = 0; j < 10; ++j) g(i, j) = gauss(rng);
    const RealMatrix w = g.transpose() * g;  // PSD

    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(w);
    for (int p : {1, 2, 3, 4, 6}) {
        double expected = 0.0;
        for (Eigen::Index i = 0; i < 10; ++i) expected += std::pow(solver.eigenvalues()(i), p);
        CHECK(trace_power(w, p) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("trace_power agrees with the naive triple-loop reference") {
    std::mt19937 rng(77);
    std::normal_distribution<double> gauss;

    RealMatrix g(50, 50);
    for (Eigen::Index i = 0; i < 50; ++i)
        for (Eigen::Index j = 0; j < 50; ++j) g(i, j) = gauss(rng);
    RealMatrix w = (g.transpose() * g) / 50.0;
    for (int p : {2, 3, 5}) {
        const double naive = oracles::naive_trace_power(to_dense(w), p);
        CHECK(trace_power(w, p) == doctest::Approx(naive).epsilon(1e-10));
    }

    ComplexMatrix gc(20, 20);
    for (Eigen::Index i = 0; i < 20; ++i)
        for (Eigen::Index j = 0; j < 20; ++j) gc(i, j) = {gauss(rng), gauss(rng)};
    ComplexMatrix wc = (gc.adjoint() * gc) / 20.0;
    for (int p : {2, 3, 4}) {
        const double naive = oracles::naive_trace_power(to_dense(wc), p);
        CHECK(trace_power(wc, p) == doctest::Approx(naive).epsilon(1e-10));
    }
}

TEST_CASE("overlap reproduces the containment geometry value 1/8") {
    for (std::int64_t L : {8, 16, 80}) {
        auto g = basic_geometry(L, ScalarField::Real,
                                {{0.0, 0.0, 4.0, 2.0, 1, 0}, {0.0, 0.0, 1.0, 1.0, 1, 1}});
        const auto st = overlap(g, 0, 1);
        CHECK(st.m_ij == L);
        CHECK(st.n_ij == L);
        CHECK(st.theta == doctest::Approx(0.125).epsilon(1e-15));
    }
}

TEST_CASE("overlap: disjoint ranges give theta = 0") {
    auto g = basic_geometry(10, ScalarField::Real,
                            {{0.0, 0.0, 1.0, 1.0, 1, 0}, {2.0, 0.0, 1.0, 1.0, 1, 1}});
    const auto st = overlap(g, 0, 1);
    CHECK(st.m_ij == 0);
    CHECK(st.theta == 0.0);
}

TEST_CASE("overlap: self-overlap gives theta = 1/(mu nu)") {
    auto g = basic_geometry(10, ScalarField::Real, {{0.0, 0.0, 5.0, 2.0, 2, 0}});
    CHECK(overlap(g, 0, 0).theta == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("overlap theta is invariant under doubling L on exact placements") {
    const std::vector<ObservableSpec> obs = {{0.0, 0.5, 3.0, 2.0, 1, 0},
                                             {1.0, 0.0, 2.5, 1.5, 2, 1}};
    auto g1 = basic_geometry(4, ScalarField::Real, obs);
    auto g2 = basic_geometry(8, ScalarField::Real, obs);
    CHECK(overlap(g1, 0, 1).theta == overlap(g2, 0, 1).theta);
    CHECK(overlap(g1, 0, 0).theta == overlap(g2, 0, 0).theta);
}

TEST_CASE("p=1 trace is the scaled squared Frobenius norm") {
    // hand-placed 3x2 matrix: Tr(B^T B / L) = sum of squares / L
    RealMatrix b(3, 2);
    b << 1, 2, 3, 4, 5, 6;
    const double L = 2.0;
    const RealMatrix w = b.transpose() * b / L;
    CHECK(trace_power(w, 1) == doctest::Approx((1 + 4 + 9 + 16 + 25 + 36) / L).epsilon(1e-14));

    // and the sampled replica value matches the assembled submatrix
    auto g = basic_geometry(5, ScalarField::Real, {{0.0, 0.0, 3.0, 2.0, 1, 0}});
    const RandomStream stream{2024, 3};
    const auto values = sample_replica(g, stream);
    const RealMatrix B = assemble_submatrix_real(g, 0, stream);
    CHECK(values[0] == doctest::Approx(B.squaredNorm() / 5.0).epsilon(1e-14));
}

TEST_CASE("1x1 scalar Wishart: Tr(W^2) = z^4") {
    auto g = basic_geometry(1, ScalarField::Real, {{0.0, 0.0, 1.0, 1.0, 2, 0}});
    g.process.family = ProcessFamily::Frozen;
    g.process.rate = 0.0;
    const RandomStream stream{9, 0};
    const double z = assemble_submatrix_real(g, 0, stream)(0, 0);
    const auto values = sample_replica(g, stream);
    CHECK(values[0] == doctest::Approx(z * z * z * z).epsilon(1e-14));
}

TEST_CASE("mean of Tr(W) matches the exact first moment m n / L") {
    auto g = basic_geometry(200, ScalarField::Real, {{0.0, 0.0, 1.0, 1.0, 1, 0}}, {0.0});
    McConfig mc;
    mc.replicas = 10000;
    mc.seed = 515;
    mc.workers = 2;
    mc.batch_size = 100;
    const auto est = run(g, mc);
    const double se_mean = std::sqrt(est.cov(0, 0) / static_cast<double>(est.replicas_used));
    CHECK(std::abs(est.mean(0) - 200.0) <= 3.0 * se_mean);
}

TEST_CASE("sharing invariant: overlapping entries at the same time are bit-identical") {
    auto g = basic_geometry(6, ScalarField::Real,
                            {{0.0, 0.0, 2.0, 2.0, 1, 0}, {0.5, 0.5, 2.0, 2.0, 1, 0}});
    const RandomStream stream{31, 12};
    const RealMatrix A = assemble_submatrix_real(g, 0, stream);
    const RealMatrix B = assemble_submatrix_real(g, 1, stream);
    // observable 1 starts 3 rows/cols below observable 0 at L=6
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) CHECK(A(r + 3, c + 3) == B(r, c));
}

TEST_CASE("PSD invariants of sampled Wisharts") {
    auto g = basic_geometry(12, ScalarField::Real,
                            {{0.0, 0.0, 2.0, 1.0, 1, 0}, {0.5, 0.0, 1.5, 1.0, 3, 1}});
    for (std::uint64_t rep = 0; rep < 40; ++rep) {
        const auto values = sample_replica(g, {88, rep});
        for (double v : values) CHECK(v >= 0.0);
        const RealMatrix B = assemble_submatrix_real(g, 0, {88, rep});
        const RealMatrix W = B.transpose() * B / 12.0;
        CHECK(trace_power(W, 2) <= trace_power(W, 1) * trace_power(W, 1) * (1 + 1e-12));
    }
}

TEST_CASE("complex field produces Hermitian PSD Wisharts") {
    auto g = basic_geometry(8, ScalarField::Complex, {{0.0, 0.0, 2.0, 1.0, 2, 0}});
    const ComplexMatrix B = assemble_submatrix_complex(g, 0, {404, 2});
    const ComplexMatrix W = B.adjoint() * B / 8.0;
    CHECK((W - W.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(W);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("quaternion embedding: eigenvalue doubling and trace halving") {
    auto g = basic_geometry(1, ScalarField::Quaternion, {{0.0, 0.0, 4.0, 4.0, 2, 0}});
    const RandomStream stream{606, 1};
    const ComplexMatrix B = assemble_submatrix_complex(g, 0, stream);  // 8x8 embedding
    REQUIRE(B.rows() == 8);
    const ComplexMatrix W = B.adjoint() * B / 1.0;

    // every eigenvalue appears twice
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(W);
    const auto lambda = solver.eigenvalues();
    for (int i = 0; i < 8; i += 2)
        CHECK(lambda(i) == doctest::Approx(lambda(i + 1)).epsilon(1e-10));

    // direct quaternion arithmetic on the same entries
    oracles::QuaternionMatrix Q(4, std::vector<oracles::Quaternion>(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const auto z = B(2 * r, 2 * c);
            const auto w = B(2 * r, 2 * c + 1);
            Q[r][c] = {z.real(), z.imag(), w.real(), w.imag()};
        }
    const auto Wq = oracles::multiply(oracles::adjoint(Q), Q);
    CHECK(0.5 * trace_power(W, 1) == doctest::Approx(oracles::quaternion_trace(Wq)).epsilon(1e-12));
    const auto Wq2 = oracles::multiply(Wq, Wq);
    CHECK(0.5 * trace_power(W, 2) ==
          doctest::Approx(oracles::quaternion_trace(Wq2)).epsilon(1e-12));

    // and the embedding of B^* B equals (embedding of B)^* (embedding of B)
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            CHECK(W(2 * r, 2 * c).real() == doctest::Approx(Wq[r][c].a).epsilon(1e-12));
            CHECK(W(2 * r, 2 * c).imag() == doctest::Approx(Wq[r][c].b).epsilon(1e-12));
            CHECK(W(2 * r, 2 * c + 1).real() == doctest::Approx(Wq[r][c].c).epsilon(1e-12));
            CHECK(W(2 * r, 2 * c + 1).imag() == doctest::Approx(Wq[r][c].d).epsilon(1e-12));
        }

    // replica statistic agrees with the quaternionic trace
    const auto values = sample_replica(g, stream);
    CHECK(values[0] == doctest::Approx(oracles::quaternion_trace(Wq2)).epsilon(1e-12));
}

TEST_CASE("sample_replica is deterministic") {
    auto g = basic_geometry(10, ScalarField::Complex,
                            {{0.0, 0.0, 2.0, 2.0, 2, 0}, {1.0, 1.0, 1.0, 1.0, 1, 1}});
    const auto a = sample_replica(g, {7171, 9});
    const auto b = sample_replica(g, {7171, 9});
    CHECK(a == b);
    const auto c = sample_replica(g, {7171, 10});
    CHECK(a != c);
}

TEST_CASE("geometry contracts") {
    auto g = basic_geometry(10, ScalarField::Real, {{0.0, 0.0, 4.0, 2.0, 1, 0}});
    g.observables[0].mu = 0.0;
    CHECK_THROWS_AS(g.validate(), ContractViolation);
    g.observables[0].mu = 4.0;
    g.observables[0].power = 0;
    CHECK_THROWS_AS(g.validate(), ContractViolation);
    g.observables[0].power = 1;
    g.observables[0].time_index = 5;
    CHECK_THROWS_AS(g.validate(), ContractViolation);
    g.observables[0].time_index = 0;
    g.L = 0;
    CHECK_THROWS_AS(g.validate(), ContractViolation);

    // rounded-to-empty extent
    auto tiny = basic_geometry(2, ScalarField::Real, {{0.0, 0.0, 0.1, 1.0, 1, 0}});
    CHECK_THROWS_AS(tiny.validate(), ContractViolation);
}
