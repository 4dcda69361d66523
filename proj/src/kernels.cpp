#include "qhdkit/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qhdkit::kernels {

namespace {

inline std::uint64_t site_mask(int n_qubits, int site) {
    return std::uint64_t{1} << (n_qubits - 1 - site);
}

// Expand a compressed index by inserting a zero bit at `mask`'s position.
inline std::uint64_t insert_zero(std::uint64_t idx, std::uint64_t mask) {
    const std::uint64_t low = idx & (mask - 1);
    const std::uint64_t high = (idx ^ low) << 1;
    return high | low;
}

// The loop bodies work on raw pointers with hand-expanded complex
// arithmetic; std::complex multiplication carries NaN-handling branches
// that cost a factor of two on these bandwidth-bound sweeps.

inline void phase_body(cplx* p, std::int64_t i, const double* diag, double theta) {
    const double angle = -theta * diag[i];
    const double cr = std::cos(angle), si = std::sin(angle);
    const double re = p[i].real(), im = p[i].imag();
    p[i] = cplx(re * cr - im * si, re * si + im * cr);
}

inline void rot_body(cplx* p, std::uint64_t i, std::uint64_t j, double cr, double si) {
    // (c - i s X) on the (i, j) pair with c = cos, s = sin
    const double ar = p[i].real(), ai = p[i].imag();
    const double br = p[j].real(), bi = p[j].imag();
    p[i] = cplx(cr * ar + si * bi, cr * ai - si * br);
    p[j] = cplx(si * ai + cr * br, -si * ar + cr * bi);
}

}  // namespace

void diagonal_phase(std::span<cplx> psi, std::span<const double> diag, double theta,
                    Exec exec) {
    const std::int64_t dim = static_cast<std::int64_t>(psi.size());
    cplx* p = psi.data();
    const double* d = diag.data();
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < dim; ++i) phase_body(p, i, d, theta);
    } else {
        for (std::int64_t i = 0; i < dim; ++i) phase_body(p, i, d, theta);
    }
}

void axis_unitary(std::span<cplx> psi, const Eigen::MatrixXcd& U, int n_axes, int axis,
                  int N, Exec exec) {
    std::int64_t inner = 1;
    for (int a = axis + 1; a < n_axes; ++a) inner *= N;
    std::int64_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= N;
    const std::int64_t fibers = outer * inner;
    cplx* p = psi.data();
    const cplx* u = U.data();  // column-major N x N

    auto body = [&](std::int64_t f, cplx* buf) {
        const std::int64_t o = f / inner;
        const std::int64_t i = f % inner;
        const std::int64_t base = o * N * inner + i;
        for (int k = 0; k < N; ++k) buf[k] = p[base + k * inner];
        for (int k2 = 0; k2 < N; ++k2) {
            double acc_r = 0.0, acc_i = 0.0;
            for (int k = 0; k < N; ++k) {
                const cplx w = u[k * N + k2];  // U(k2, k)
                acc_r += w.real() * buf[k].real() - w.imag() * buf[k].imag();
                acc_i += w.real() * buf[k].imag() + w.imag() * buf[k].real();
            }
            p[base + k2 * inner] = cplx(acc_r, acc_i);
        }
    };

    if (exec == Exec::Parallel) {
#pragma omp parallel
        {
            std::vector<cplx> buf(static_cast<std::size_t>(N));
#pragma omp for schedule(static)
            for (std::int64_t f = 0; f < fibers; ++f) body(f, buf.data());
        }
    } else {
        std::vector<cplx> buf(static_cast<std::size_t>(N));
        for (std::int64_t f = 0; f < fibers; ++f) body(f, buf.data());
    }
}

void x_rotation(std::span<cplx> psi, int n_qubits, int site, double theta, Exec exec) {
    const std::uint64_t mask = site_mask(n_qubits, site);
    const std::int64_t half = static_cast<std::int64_t>(psi.size() / 2);
    const double cr = std::cos(theta), si = std::sin(theta);
    cplx* p = psi.data();

    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t q = 0; q < half; ++q) {
            const std::uint64_t i = insert_zero(static_cast<std::uint64_t>(q), mask);
            rot_body(p, i, i | mask, cr, si);
        }
    } else {
        for (std::int64_t q = 0; q < half; ++q) {
            const std::uint64_t i = insert_zero(static_cast<std::uint64_t>(q), mask);
            rot_body(p, i, i | mask, cr, si);
        }
    }
}

void hop_rotation(std::span<cplx> psi, int n_qubits, int site_a, int site_b, double theta,
                  Exec exec) {
    const std::uint64_t ma = site_mask(n_qubits, site_a);
    const std::uint64_t mb = site_mask(n_qubits, site_b);
    const std::uint64_t lo = ma < mb ? ma : mb;
    const std::uint64_t hi = ma < mb ? mb : ma;
    const std::int64_t quarter = static_cast<std::int64_t>(psi.size() / 4);
    // exp(-i theta (XX+YY)) is a Givens rotation of angle 2*theta on the
    // |01>,|10> pair; |00> and |11> are untouched
    const double cr = std::cos(2.0 * theta), si = std::sin(2.0 * theta);
    cplx* p = psi.data();

    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t q = 0; q < quarter; ++q) {
            const std::uint64_t base =
                insert_zero(insert_zero(static_cast<std::uint64_t>(q), lo), hi);
            rot_body(p, base | mb, base | ma, cr, si);
        }
    } else {
        for (std::int64_t q = 0; q < quarter; ++q) {
            const std::uint64_t base =
                insert_zero(insert_zero(static_cast<std::uint64_t>(q), lo), hi);
            rot_body(p, base | mb, base | ma, cr, si);
        }
    }
}

double norm(std::span<const cplx> psi, Exec exec) {
    const std::int64_t dim = static_cast<std::int64_t>(psi.size());
    const cplx* p = psi.data();
    double total = 0.0;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(+ : total)
        for (std::int64_t i = 0; i < dim; ++i)
            total += p[i].real() * p[i].real() + p[i].imag() * p[i].imag();
    } else {
        for (std::int64_t i = 0; i < dim; ++i)
            total += p[i].real() * p[i].real() + p[i].imag() * p[i].imag();
    }
    return std::sqrt(total);
}

}  // namespace qhdkit::kernels
