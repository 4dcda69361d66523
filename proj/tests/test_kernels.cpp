#include <doctest.h>

#include <complex>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "oracles.hpp"
#include "qhdkit/kernels.hpp"

using namespace qhdkit;
using kernels::cplx;
using kernels::Exec;

namespace {

std::vector<cplx> random_state(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<cplx> psi(dim);
    double total = 0.0;
    for (auto& a : psi) {
        const double re = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        const double im = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        a = {re, im};
        total += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto& a : psi) a *= scale;
    return psi;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference bit for bit") {
    const int nq = 10;
    const std::size_t dim = std::size_t{1} << nq;
    std::vector<double> diag(dim);
    std::mt19937_64 rng(71);
    for (auto& d : diag) d = static_cast<double>(rng() >> 11) * 0x1.0p-53;

    auto serial = random_state(dim, 5);
    auto parallel = serial;

    kernels::diagonal_phase(serial, diag, 0.37, Exec::Serial);
    kernels::diagonal_phase(parallel, diag, 0.37, Exec::Parallel);
    CHECK(max_abs_diff(serial, parallel) == 0.0);

    for (int site = 0; site < nq; ++site) {
        kernels::x_rotation(serial, nq, site, 0.11 * (site + 1), Exec::Serial);
        kernels::x_rotation(parallel, nq, site, 0.11 * (site + 1), Exec::Parallel);
    }
    CHECK(max_abs_diff(serial, parallel) == 0.0);

    for (int site = 0; site + 1 < nq; site += 2) {
        kernels::hop_rotation(serial, nq, site, site + 1, 0.23, Exec::Serial);
        kernels::hop_rotation(parallel, nq, site, site + 1, 0.23, Exec::Parallel);
    }
    CHECK(max_abs_diff(serial, parallel) == 0.0);

    const int N = 7;
    Eigen::MatrixXcd U(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            U(i, j) = cplx(static_cast<double>(rng() >> 11) * 0x1.0p-53,
                           static_cast<double>(rng() >> 11) * 0x1.0p-53);
    auto s2 = random_state(static_cast<std::size_t>(N * N * N), 6);
    auto p2 = s2;
    for (int axis = 0; axis < 3; ++axis) {
        kernels::axis_unitary(s2, U, 3, axis, N, Exec::Serial);
        kernels::axis_unitary(p2, U, 3, axis, N, Exec::Parallel);
    }
    CHECK(max_abs_diff(s2, p2) == 0.0);
}

TEST_CASE("x_rotation agrees with the dense 2x2 unitary") {
    const int nq = 3;
    const std::size_t dim = 8;
    const double theta = 0.437;
    auto psi = random_state(dim, 9);

    // dense expectation via the term-level oracle
    qhdkit::PauliTerm x1;
    x1.coeff = 1.0;
    x1.factors = {{1, qhdkit::SiteOp::X}};
    const Eigen::MatrixXcd X = oracles::dense_from_terms({x1}, nq);
    const Eigen::MatrixXcd U = (std::complex<double>(0, -theta) * X).exp();

    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
    const Eigen::VectorXcd expected = U * v;

    kernels::x_rotation(psi, nq, 1, theta, Exec::Serial);
    for (std::size_t i = 0; i < dim; ++i)
        CHECK(std::abs(psi[i] - expected(static_cast<Eigen::Index>(i))) <= 1e-13);
}

TEST_CASE("hop_rotation agrees with the dense XX+YY exponential") {
    const int nq = 4;
    const std::size_t dim = 16;
    const double theta = 0.291;
    auto psi = random_state(dim, 13);

    qhdkit::PauliTerm xx, yy;
    xx.coeff = 1.0;
    xx.factors = {{1, qhdkit::SiteOp::X}, {2, qhdkit::SiteOp::X}};
    yy.coeff = 1.0;
    yy.factors = {{1, qhdkit::SiteOp::Y}, {2, qhdkit::SiteOp::Y}};
    const Eigen::MatrixXcd G = oracles::dense_from_terms({xx, yy}, nq);
    const Eigen::MatrixXcd U = (std::complex<double>(0, -theta) * G).exp();

    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
    const Eigen::VectorXcd expected = U * v;

    kernels::hop_rotation(psi, nq, 1, 2, theta, Exec::Serial);
    for (std::size_t i = 0; i < dim; ++i)
        CHECK(std::abs(psi[i] - expected(static_cast<Eigen::Index>(i))) <= 1e-13);
}

TEST_CASE("axis_unitary contracts the right tensor slot") {
    // on a 2-axis state, contracting axis 0 is U (x) I and axis 1 is I (x) U
    const int N = 3;
    std::mt19937_64 rng(17);
    Eigen::MatrixXcd U(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            U(i, j) = cplx(static_cast<double>(rng() >> 11) * 0x1.0p-53,
                           static_cast<double>(rng() >> 11) * 0x1.0p-53);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);

    auto psi = random_state(static_cast<std::size_t>(N * N), 21);
    Eigen::VectorXcd v(N * N);
    for (int i = 0; i < N * N; ++i) v(i) = psi[static_cast<std::size_t>(i)];

    auto kron_apply = [&](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
        Eigen::MatrixXcd K(N * N, N * N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int c = 0; c < N; ++c)
                    for (int d = 0; d < N; ++d)
                        K(a * N + b, c * N + d) = A(a, c) * B(b, d);
        return (K * v).eval();
    };

    auto axis0 = psi;
    kernels::axis_unitary(axis0, U, 2, 0, N, Exec::Serial);
    const Eigen::VectorXcd want0 = kron_apply(U, I);
    for (int i = 0; i < N * N; ++i)
        CHECK(std::abs(axis0[static_cast<std::size_t>(i)] - want0(i)) <= 1e-13);

    auto axis1 = psi;
    kernels::axis_unitary(axis1, U, 2, 1, N, Exec::Serial);
    const Eigen::VectorXcd want1 = kron_apply(I, U);
    for (int i = 0; i < N * N; ++i)
        CHECK(std::abs(axis1[static_cast<std::size_t>(i)] - want1(i)) <= 1e-13);
}

TEST_CASE("rotations preserve the norm") {
    const int nq = 8;
    auto psi = random_state(std::size_t{1} << nq, 33);
    for (int site = 0; site < nq; ++site)
        kernels::x_rotation(psi, nq, site, 0.7 + site, Exec::Parallel);
    for (int site = 0; site + 1 < nq; ++site)
        kernels::hop_rotation(psi, nq, site, site + 1, 1.3 - 0.1 * site, Exec::Parallel);
    CHECK(std::abs(kernels::norm(psi, Exec::Parallel) - 1.0) <= 1e-12);
}
