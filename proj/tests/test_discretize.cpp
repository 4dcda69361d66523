#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "qhdkit/discretize.hpp"

using namespace qhdkit;

namespace {

Problem demo_qp_problem() {
    QPData qp;
    qp.Q = {{-2.0, 1.0}, {1.0, -1.0}};
    qp.b = {0.75, -0.25};
    return from_qp(qp, BoxBounds::unit(2));
}

}  // namespace

TEST_CASE("kinetic stencil for N=3") {
    Grid g(3);
    CHECK(g.h == doctest::Approx(0.5));
    const Eigen::MatrixXd L = kinetic_offdiag(g);
    CHECK(L(0, 1) == doctest::Approx(4.0));
    CHECK(L(1, 0) == doctest::Approx(4.0));
    CHECK(L(1, 2) == doctest::Approx(4.0));
    CHECK(L(0, 2) == 0.0);
    CHECK(L(0, 0) == 0.0);
}

TEST_CASE("kinetic stencil is symmetric with a zero diagonal") {
    for (int N = 3; N <= 12; ++N) {
        const Eigen::MatrixXd L = kinetic_offdiag(Grid(N));
        CHECK((L - L.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(L.diagonal().cwiseAbs().maxCoeff() == 0.0);
        int nonzeros = 0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (L(i, j) != 0.0) ++nonzeros;
        CHECK(nonzeros == 2 * (N - 1));
    }
}

TEST_CASE("kinetic stencil eigenvalues at N=3") {
    // dense eigensolver oracle: {-sqrt(2)/h^2, 0, sqrt(2)/h^2}
    Grid g(3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kinetic_offdiag(g));
    const double w = std::sqrt(2.0) / (g.h * g.h);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-w).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(2) == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("potential diagonal sampling") {
    Grid g3(3);
    const auto lin = potential_diag(parse("x", {"x"}), g3);
    CHECK(lin == std::vector<double>{0.0, 0.5, 1.0});

    Grid g5(5);
    const auto sq = potential_diag(parse("x^2", {"x"}), g5);
    CHECK(sq[0] == doctest::Approx(0.0));
    CHECK(sq[1] == doctest::Approx(1.0 / 16));
    CHECK(sq[2] == doctest::Approx(0.25));
    CHECK(sq[3] == doctest::Approx(9.0 / 16));
    CHECK(sq[4] == doctest::Approx(1.0));

    const auto ex = potential_diag(parse("exp(4*x)", {"x"}), g3);
    CHECK(ex[0] == doctest::Approx(1.0));
    CHECK(ex[1] == doctest::Approx(std::exp(2.0)));
    CHECK(ex[2] == doctest::Approx(std::exp(4.0)));
}

TEST_CASE("assembled dimensions and term counts") {
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    const DiscretizedHamiltonian dh = assemble_discretized(p, 3);
    CHECK(dh.dimension() == 9);
    CHECK(dh.univariate.size() == 2);
    CHECK(dh.bivariate.size() == 1);

    Expr e = parse("(2*y - 1)^2*(z - 2/5) - (2*x - 1)*z + y*(2*x - 3/2)^2",
                   {"x", "y", "z"});
    const Problem p3 = normalize_to_unit_box(from_expr(e, BoxBounds::unit(3)));
    const DiscretizedHamiltonian dh3 = assemble_discretized(p3, 3);
    CHECK(dh3.dimension() == 27);
    const Eigen::MatrixXd H = materialize(dh3, 0.7, 1.3);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("diagonal of the materialized operator equals f on the grid") {
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    const int N = 3;
    const DiscretizedHamiltonian dh = assemble_discretized(p, N);
    const Eigen::MatrixXd F = materialize(dh, 0.0, 1.0);
    for (int k1 = 0; k1 < N; ++k1)
        for (int k2 = 0; k2 < N; ++k2) {
            const std::vector<double> x = {dh.grid.node(k1), dh.grid.node(k2)};
            const int idx = k1 * N + k2;
            CHECK(std::abs(F(idx, idx) - oracles::demo_qp(x)) <= 1e-12);
        }
    // off-diagonal part vanishes at zero kinetic weight
    Eigen::MatrixXd offdiag = F;
    offdiag.diagonal().setZero();
    CHECK(offdiag.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pure kinetic materialization for a free particle") {
    Problem p;
    p.objective.n = 1;
    p.bounds = BoxBounds::unit(1);
    p.to_original = {AffineMap{}};
    const DiscretizedHamiltonian dh = assemble_discretized(p, 5);
    const Eigen::MatrixXd K = materialize(dh, 1.0, 0.0);
    const Eigen::MatrixXd expected = -0.5 * kinetic_offdiag(dh.grid);
    CHECK((K - expected).cwiseAbs().maxCoeff() <= 1e-14);
    // and the potential-only view of f = 0 is the zero matrix
    CHECK(materialize(dh, 0.0, 1.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("materialized Hermiticity at random schedule weights") {
    std::mt19937_64 rng(41);
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    const DiscretizedHamiltonian dh = assemble_discretized(p, 5);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double b = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const Eigen::MatrixXd H = materialize(dh, a, b);
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("ground state concentrates near the minimizer") {
    // with equal kinetic/potential weight the lowest eigenvector of the
    // demo QP discretization puts most of its mass in the quadrant of the
    // boundary minimum (0,1)
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    const int N = 5;
    const DiscretizedHamiltonian dh = assemble_discretized(p, N);
    const Eigen::MatrixXd H = materialize(dh, 1.0, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd ground = es.eigenvectors().col(0);
    double mass_total = 0.0, x_low = 0.0, y_high = 0.0, quad_min = 0.0, quad_far = 0.0;
    for (int k1 = 0; k1 < N; ++k1)
        for (int k2 = 0; k2 < N; ++k2) {
            const double w = ground(k1 * N + k2) * ground(k1 * N + k2);
            const double x = dh.grid.node(k1), y = dh.grid.node(k2);
            mass_total += w;
            if (x <= 0.5) x_low += w;
            if (y >= 0.5) y_high += w;
            if (x <= 0.5 && y >= 0.5) quad_min += w;
            if (x > 0.5 && y < 0.5) quad_far += w;
        }
    CHECK(mass_total == doctest::Approx(1.0));
    // both half-boxes through the minimizer hold the majority of the mass,
    // beating the 3/5-of-nodes baseline of the closed split
    CHECK(x_low > 0.6);
    CHECK(y_high > 0.6);
    // and the minimizer quadrant dominates the opposite corner's basin
    CHECK(quad_min > 2.0 * quad_far);
}

TEST_CASE("grid refinement drives the diagonal minimum to the true minimum") {
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    double prev_err = 1e9;
    for (int N : {5, 9, 17, 33}) {
        const DiscretizedHamiltonian dh = assemble_discretized(p, N);
        const auto diag = potential_on_grid(dh);
        const double min_diag = *std::min_element(diag.begin(), diag.end());
        const double err = std::abs(min_diag - (-0.75));
        CHECK(err <= prev_err + 1e-15);
        prev_err = err;
    }
    CHECK(prev_err <= 1e-9);  // -0.75 sits on every refined grid corner
}

TEST_CASE("materialize respects the dimension cap") {
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    const DiscretizedHamiltonian dh = assemble_discretized(p, 9);
    CHECK_THROWS_AS(materialize(dh, 1.0, 1.0, 64), DimensionCapExceeded);
}

TEST_CASE("constant objectives carry their offset onto the diagonal") {
    Problem p;
    p.objective.n = 1;
    p.objective.constant = 2.5;
    p.bounds = BoxBounds::unit(1);
    p.to_original = {AffineMap{}};
    const DiscretizedHamiltonian dh = assemble_discretized(p, 4);
    const Eigen::MatrixXd F = materialize(dh, 0.0, 1.0);
    for (int k = 0; k < 4; ++k) CHECK(F(k, k) == doctest::Approx(2.5));
}

TEST_CASE("dense dump round trip") {
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    const DiscretizedHamiltonian dh = assemble_discretized(p, 3);
    const Eigen::MatrixXd H = materialize(dh, 0.4, 1.1);
    const std::string path = "/tmp/qhdkit-test-dense.bin";
    dump_dense(H, path);

    std::ifstream in(path, std::ios::binary);
    std::int64_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    REQUIRE(dim == 9);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            CHECK(v == H(i, j));
        }
}

TEST_CASE("schedule overload of materialize") {
    const Problem p = normalize_to_unit_box(demo_qp_problem());
    const DiscretizedHamiltonian dh = assemble_discretized(p, 4);
    const Schedule s = Schedule::smooth_log(1.0, 10.0);
    const Eigen::MatrixXd a = materialize(dh, 3.7, s);
    const Eigen::MatrixXd b = materialize(dh, s.kinetic_coeff(3.7), s.potential_coeff(3.7));
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}
