#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

namespace qhdkit::kernels {

using cplx = std::complex<double>;

/// Kernel execution mode. Parallel falls back to the serial path when
/// compiled without OpenMP. The serial variants are the reference
/// implementation the parallel ones are tested against.
enum class Exec { Serial, Parallel };

/// psi[i] *= exp(-i * theta * diag[i])
void diagonal_phase(std::span<cplx> psi, std::span<const double> diag, double theta,
                    Exec exec);

/// Contract axis `axis` of the state viewed as an n_axes-fold tensor of
/// extent N per axis (axis 0 most significant) with the N x N matrix U.
void axis_unitary(std::span<cplx> psi, const Eigen::MatrixXcd& U, int n_axes, int axis,
                  int N, Exec exec);

/// exp(-i * theta * X_site). Site k addresses bit (n_qubits-1-k).
void x_rotation(std::span<cplx> psi, int n_qubits, int site, double theta, Exec exec);

/// exp(-i * theta * (X_a X_b + Y_a Y_b)) for distinct sites a < b; acts as
/// a Givens rotation of angle 2*theta on the |01>,|10> pair.
void hop_rotation(std::span<cplx> psi, int n_qubits, int site_a, int site_b, double theta,
                  Exec exec);

double norm(std::span<const cplx> psi, Exec exec);

}  // namespace qhdkit::kernels
