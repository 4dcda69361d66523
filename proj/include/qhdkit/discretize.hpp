#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qhdkit/problem.hpp"
#include "qhdkit/schedule.hpp"

namespace qhdkit {

/// Uniform grid on [0,1] with both endpoints included.
struct Grid {
    int N;     // points per dimension, N >= 3
    double h;  // spacing 1/(N-1)

    explicit Grid(int points);
    double node(int k) const { return static_cast<double>(k) * h; }
};

/// Structured finite-difference form of the evolution generator:
/// a kinetic block per dimension (the off-diagonal tridiagonal stencil,
/// global phase dropped) plus diagonal potential blocks sampled from the
/// objective. The kinetic group is scheduled by e^phi * (-1/2), the
/// potential group by e^chi.
struct DiscretizedHamiltonian {
    struct DiagTerm {
        int slot;                    // dimension index
        std::vector<double> values;  // g(k*h), k = 0..N-1
    };
    struct DiagProduct {
        int slot_a, slot_b;  // slot_a < slot_b
        std::vector<double> a, b;
    };

    int n = 0;
    Grid grid{3};
    std::vector<DiagTerm> univariate;
    std::vector<DiagProduct> bivariate;
    double offset = 0.0;  // constant part of the objective

    std::size_t dimension() const;  // N^n
};

/// The N x N off-diagonal kinetic stencil: symmetric, zero diagonal,
/// 1/h^2 on the two adjacent diagonals.
Eigen::MatrixXd kinetic_offdiag(const Grid& grid);

/// Sample a univariate expression on the grid nodes.
std::vector<double> potential_diag(const Expr& g, const Grid& grid);

/// Assemble the discretization of a unit-box problem on an N-point grid.
DiscretizedHamiltonian assemble_discretized(const Problem& p, int N,
                                            std::size_t cap = std::size_t{1} << 20);

/// Dense symmetric matrix  kinetic_scale * (-1/2) * sum_i L'_i  +
/// potential_scale * (diagonal objective samples + offset).
Eigen::MatrixXd materialize(const DiscretizedHamiltonian& dh, double kinetic_scale,
                            double potential_scale,
                            std::size_t cap = std::size_t{1} << 20);

/// Same, with the scales read off a schedule at time t.
Eigen::MatrixXd materialize(const DiscretizedHamiltonian& dh, double t,
                            const Schedule& schedule,
                            std::size_t cap = std::size_t{1} << 20);

/// The full objective sampled over the grid, multi-index (k_1..k_n) with
/// k_1 most significant; equals the diagonal of the potential group.
std::vector<double> potential_on_grid(const DiscretizedHamiltonian& dh);

/// Debug dump: int64 dimension header then row-major float64 entries.
void dump_dense(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace qhdkit
