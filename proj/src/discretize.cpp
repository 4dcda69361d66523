#include "qhdkit/discretize.hpp"

#include <algorithm>
#include <fstream>

namespace qhdkit {

Grid::Grid(int points) : N(points), h(1.0 / (points - 1)) {
    if (points < 3) throw Error("grid needs at least 3 points per dimension");
}

std::size_t DiscretizedHamiltonian::dimension() const {
    std::size_t d = 1;
    for (int i = 0; i < n; ++i) d *= static_cast<std::size_t>(grid.N);
    return d;
}

Eigen::MatrixXd kinetic_offdiag(const Grid& grid) {
    const int N = grid.N;
    const double w = 1.0 / (grid.h * grid.h);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    for (int k = 0; k + 1 < N; ++k) {
        L(k, k + 1) = w;
        L(k + 1, k) = w;
    }
    return L;
}

std::vector<double> potential_diag(const Expr& g, const Grid& grid) {
    // the expression references exactly one variable; evaluate with that
    // slot filled and the rest zero
    const int nvars = g.variable_count();
    std::vector<double> point(static_cast<std::size_t>(std::max(nvars, 1)), 0.0);
    std::vector<double> d(static_cast<std::size_t>(grid.N));
    auto vars = g.variables();
    const int var = vars.empty() ? 0 : *vars.begin();
    for (int k = 0; k < grid.N; ++k) {
        point[static_cast<std::size_t>(var)] = grid.node(k);
        d[static_cast<std::size_t>(k)] = eval(g, point);
    }
    return d;
}

DiscretizedHamiltonian assemble_discretized(const Problem& p, int N, std::size_t cap) {
    if (!p.bounds.is_unit())
        throw Error("discretization requires a unit-box problem; call normalize_to_unit_box first");
    DiscretizedHamiltonian dh;
    dh.n = p.dimension();
    dh.grid = Grid(N);
    dh.offset = p.objective.constant;
    if (dh.dimension() > cap)
        throw DimensionCapExceeded("grid dimension " + std::to_string(dh.dimension()) +
                                   " exceeds cap " + std::to_string(cap));

    for (const auto& u : p.objective.univariate)
        dh.univariate.push_back({u.var, potential_diag(u.g, dh.grid)});
    for (const auto& b : p.objective.bivariate) {
        DiscretizedHamiltonian::DiagProduct dp;
        dp.slot_a = b.var_a;
        dp.slot_b = b.var_b;
        dp.a = potential_diag(b.p, dh.grid);
        dp.b = potential_diag(b.q, dh.grid);
        dh.bivariate.push_back(std::move(dp));
    }
    return dh;
}

namespace {

// stride of `slot` in the row-major multi-index layout (slot 0 most significant)
std::size_t slot_stride(int n, int N, int slot) {
    std::size_t s = 1;
    for (int i = slot + 1; i < n; ++i) s *= static_cast<std::size_t>(N);
    return s;
}

}  // namespace

std::vector<double> potential_on_grid(const DiscretizedHamiltonian& dh) {
    const std::size_t dim = dh.dimension();
    const int N = dh.grid.N;
    std::vector<double> diag(dim, dh.offset);
    for (const auto& term : dh.univariate) {
        const std::size_t stride = slot_stride(dh.n, N, term.slot);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const int k = static_cast<int>((idx / stride) % static_cast<std::size_t>(N));
            diag[idx] += term.values[static_cast<std::size_t>(k)];
        }
    }
    for (const auto& term : dh.bivariate) {
        const std::size_t sa = slot_stride(dh.n, N, term.slot_a);
        const std::size_t sb = slot_stride(dh.n, N, term.slot_b);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const int ka = static_cast<int>((idx / sa) % static_cast<std::size_t>(N));
            const int kb = static_cast<int>((idx / sb) % static_cast<std::size_t>(N));
            diag[idx] += term.a[static_cast<std::size_t>(ka)] * term.b[static_cast<std::size_t>(kb)];
        }
    }
    return diag;
}

Eigen::MatrixXd materialize(const DiscretizedHamiltonian& dh, double kinetic_scale,
                            double potential_scale, std::size_t cap) {
    const std::size_t dim = dh.dimension();
    if (dim > cap)
        throw DimensionCapExceeded("materialize dimension " + std::to_string(dim) +
                                   " exceeds cap " + std::to_string(cap));
    const int N = dh.grid.N;
    const double w = kinetic_scale * (-0.5) / (dh.grid.h * dh.grid.h);

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    // kinetic: couple adjacent nodes along each dimension
    for (int slot = 0; slot < dh.n; ++slot) {
        const std::size_t stride = slot_stride(dh.n, N, slot);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const int k = static_cast<int>((idx / stride) % static_cast<std::size_t>(N));
            if (k + 1 < N) {
                const std::size_t jdx = idx + stride;
                H(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(jdx)) += w;
                H(static_cast<Eigen::Index>(jdx), static_cast<Eigen::Index>(idx)) += w;
            }
        }
    }
    const auto diag = potential_on_grid(dh);
    for (std::size_t idx = 0; idx < dim; ++idx)
        H(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) +=
            potential_scale * diag[idx];
    return H;
}

Eigen::MatrixXd materialize(const DiscretizedHamiltonian& dh, double t,
                            const Schedule& schedule, std::size_t cap) {
    return materialize(dh, schedule.kinetic_coeff(t), schedule.potential_coeff(t), cap);
}

void dump_dense(const Eigen::MatrixXd& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    const std::int64_t dim = m.rows();
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
}

}  // namespace qhdkit
