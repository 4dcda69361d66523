#include "qhdkit/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

namespace qhdkit {

using kernels::cplx;

double StateVector::norm() const { return kernels::norm(amps, kernels::Exec::Serial); }

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) p[i] = std::norm(amps[i]);
    return p;
}

StateVector initial_state(std::size_t dimension) {
    if (dimension < 1) throw Error("state dimension must be positive");
    StateVector psi;
    const double amp = 1.0 / std::sqrt(static_cast<double>(dimension));
    psi.amps.assign(dimension, cplx(amp, 0.0));
    return psi;
}

namespace {

void check_norm(const StateVector& psi) {
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > 1e-6)
        throw EvolveError("norm drift " + std::to_string(drift) +
                          " exceeds 1e-6; increase the step count");
}

}  // namespace

StateVector evolve(const DiscretizedHamiltonian& dh, const Schedule& schedule,
                   const EvolveConfig& cfg) {
    if (cfg.steps < 1) throw Error("step count must be at least 1");
    const std::size_t dim = dh.dimension();
    if (dim > cfg.direct_cap)
        throw DimensionCapExceeded("direct dimension " + std::to_string(dim) +
                                   " exceeds cap " + std::to_string(cfg.direct_cap));
    const int N = dh.grid.N;

    const std::vector<double> diag = potential_on_grid(dh);

    // The per-dimension kinetic blocks commute, so each step applies the
    // exact stencil exponential axis by axis via the eigenbasis.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kinetic_offdiag(dh.grid));
    const Eigen::MatrixXd V = es.eigenvectors();
    const Eigen::VectorXd evals = es.eigenvalues();

    StateVector psi = initial_state(dim);
    psi.basis = {Backend::Direct, dh.n, N, 0};

    const double dt = schedule.total_time() / cfg.steps;
    for (int s = 0; s < cfg.steps; ++s) {
        const double tm = (static_cast<double>(s) + 0.5) * dt;
        const double a = -0.5 * schedule.kinetic_coeff(tm);
        const double b = schedule.potential_coeff(tm);

        kernels::diagonal_phase(psi.amps, diag, 0.5 * dt * b, cfg.exec);

        Eigen::VectorXcd phases(N);
        for (int k = 0; k < N; ++k)
            phases(k) = std::polar(1.0, -dt * a * evals(k));
        const Eigen::MatrixXcd U = V * phases.asDiagonal() * V.transpose();
        for (int axis = 0; axis < dh.n; ++axis)
            kernels::axis_unitary(psi.amps, U, dh.n, axis, N, cfg.exec);

        kernels::diagonal_phase(psi.amps, diag, 0.5 * dt * b, cfg.exec);
    }
    check_norm(psi);
    return psi;
}

namespace {

// Precomputed kinetic structure of an embedded IR. Single-site X terms
// commute and are applied exactly. Hop chains (XX+YY pairs) within a
// register do not commute; when the register is small enough its kinetic
// block is exponentiated exactly through a per-register eigenbasis,
// otherwise the pairs are split by parity inside each step.
struct KineticPlan {
    struct Single {
        int site;
        double coeff;
    };
    struct Hop {
        int site_a, site_b;
        double coeff;  // shared XX and YY weight
    };
    std::vector<Single> singles;
    std::vector<Hop> even_hops, odd_hops;  // disjoint within each parity class

    bool exact_register = false;  // use the dense per-register exponential
    Eigen::MatrixXd reg_vectors;  // eigenbasis of the register kinetic block
    Eigen::VectorXd reg_values;
};

constexpr int kExactRegisterBits = 12;  // dense register exponentials up to 2^12

KineticPlan plan_kinetic(const HamiltonianIR& ir) {
    KineticPlan plan;
    std::map<std::pair<int, int>, std::pair<double, double>> hops;  // (a,b) -> (xx, yy)
    for (const auto& t : ir.kinetic) {
        if (t.factors.size() == 1 && t.factors[0].op == SiteOp::X) {
            plan.singles.push_back({t.factors[0].site, t.coeff});
            continue;
        }
        if (t.factors.size() == 2 && t.factors[0].op == t.factors[1].op &&
            (t.factors[0].op == SiteOp::X || t.factors[0].op == SiteOp::Y)) {
            auto& slot = hops[{t.factors[0].site, t.factors[1].site}];
            (t.factors[0].op == SiteOp::X ? slot.first : slot.second) += t.coeff;
            continue;
        }
        throw Error("unsupported kinetic term in IR");
    }
    for (const auto& [sites, cc] : hops) {
        if (cc.first != cc.second)
            throw Error("hop terms must pair XX and YY with equal coefficients");
        if (sites.first / ir.r != sites.second / ir.r)
            throw Error("hop terms must stay within one register");
        KineticPlan::Hop h{sites.first, sites.second, cc.first};
        const int local = sites.first % ir.r;
        (local % 2 == 0 ? plan.even_hops : plan.odd_hops).push_back(h);
    }

    if (!hops.empty() && ir.r <= kExactRegisterBits) {
        // registers are identical, so one dense block serves them all;
        // register i occupies a contiguous bit range and acts as tensor
        // axis i of the embedded state
        const std::size_t reg_dim = std::size_t{1} << ir.r;
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(reg_dim),
                                                  static_cast<Eigen::Index>(reg_dim));
        for (const auto& [sites, cc] : hops) {
            if (sites.first >= ir.r) continue;  // first register is representative
            const std::uint64_t ma = std::uint64_t{1} << (ir.r - 1 - sites.first);
            const std::uint64_t mb = std::uint64_t{1} << (ir.r - 1 - sites.second);
            for (std::size_t idx = 0; idx < reg_dim; ++idx) {
                const bool ba = idx & ma, bb = idx & mb;
                if (ba != bb) {
                    // XX+YY maps |01> <-> |10> with weight 2
                    const std::size_t jdx = idx ^ ma ^ mb;
                    K(static_cast<Eigen::Index>(jdx), static_cast<Eigen::Index>(idx)) +=
                        2.0 * cc.first;
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
        plan.exact_register = true;
        plan.reg_vectors = es.eigenvectors();
        plan.reg_values = es.eigenvalues();
    }
    return plan;
}

std::vector<double> potential_diagonal(const HamiltonianIR& ir, std::size_t dim) {
    std::vector<double> diag(dim, ir.offset);
    const int nq = ir.num_qubits;
    for (const auto& t : ir.potential) {
        std::uint64_t mask = 0;
        for (const auto& f : t.factors) {
            if (f.op != SiteOp::Num)
                throw Error("potential group must be diagonal in number operators");
            mask |= std::uint64_t{1} << (nq - 1 - f.site);
        }
        for (std::size_t idx = 0; idx < dim; ++idx)
            if ((idx & mask) == mask) diag[idx] += t.coeff;
    }
    return diag;
}

}  // namespace

StateVector evolve(const HamiltonianIR& ir, const Schedule& schedule,
                   const EvolveConfig& cfg) {
    if (cfg.steps < 1) throw Error("step count must be at least 1");
    if (ir.num_qubits >= 63) throw DimensionCapExceeded("too many sites to simulate");
    const std::size_t dim = std::size_t{1} << ir.num_qubits;
    if (dim > cfg.embedded_cap)
        throw DimensionCapExceeded("embedded dimension " + std::to_string(dim) +
                                   " exceeds cap " + std::to_string(cfg.embedded_cap));

    const std::vector<double> diag = potential_diagonal(ir, dim);
    const KineticPlan plan = plan_kinetic(ir);

    StateVector psi = initial_state(dim);
    psi.basis = {Backend::Embedded, ir.n_vars, ir.grid_points, ir.num_qubits};

    const double dt = schedule.total_time() / cfg.steps;
    for (int s = 0; s < cfg.steps; ++s) {
        const double tm = (static_cast<double>(s) + 0.5) * dt;
        const double a = -0.5 * schedule.kinetic_coeff(tm);
        const double b = schedule.potential_coeff(tm);

        kernels::diagonal_phase(psi.amps, diag, 0.5 * dt * b, cfg.exec);

        for (const auto& xs : plan.singles)
            kernels::x_rotation(psi.amps, ir.num_qubits, xs.site, dt * a * xs.coeff, cfg.exec);
        if (plan.exact_register) {
            const Eigen::Index reg_dim = plan.reg_values.size();
            Eigen::VectorXcd phases(reg_dim);
            for (Eigen::Index k = 0; k < reg_dim; ++k)
                phases(k) = std::polar(1.0, -dt * a * plan.reg_values(k));
            const Eigen::MatrixXcd U =
                plan.reg_vectors * phases.asDiagonal() * plan.reg_vectors.transpose();
            for (int reg = 0; reg < ir.n_vars; ++reg)
                kernels::axis_unitary(psi.amps, U, ir.n_vars, reg,
                                      static_cast<int>(reg_dim), cfg.exec);
        } else {
            for (const auto& h : plan.even_hops)
                kernels::hop_rotation(psi.amps, ir.num_qubits, h.site_a, h.site_b,
                                      0.5 * dt * a * h.coeff, cfg.exec);
            for (const auto& h : plan.odd_hops)
                kernels::hop_rotation(psi.amps, ir.num_qubits, h.site_a, h.site_b,
                                      dt * a * h.coeff, cfg.exec);
            for (const auto& h : plan.even_hops)
                kernels::hop_rotation(psi.amps, ir.num_qubits, h.site_a, h.site_b,
                                      0.5 * dt * a * h.coeff, cfg.exec);
        }

        kernels::diagonal_phase(psi.amps, diag, 0.5 * dt * b, cfg.exec);
    }
    check_norm(psi);
    return psi;
}

std::vector<std::uint64_t> sample(const StateVector& psi, int shots, std::uint64_t seed) {
    if (shots < 0) throw Error("shot count must be nonnegative");
    std::vector<double> cum(psi.amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.amps.size(); ++i) {
        acc += std::norm(psi.amps[i]);
        cum[i] = acc;
    }
    if (acc <= 0.0) throw Error("cannot sample the zero state");

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(shots));
    for (int s = 0; s < shots; ++s) {
        // 53-bit uniform in [0,1); implementation-defined distributions are
        // avoided so sequences are reproducible across platforms
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        out.push_back(static_cast<std::uint64_t>(it == cum.end() ? cum.size() - 1
                                                                 : static_cast<std::size_t>(it - cum.begin())));
    }
    return out;
}

std::string outcome_bitstring(std::uint64_t index, int n_qubits) {
    std::string bits(static_cast<std::size_t>(n_qubits), '0');
    for (int k = 0; k < n_qubits; ++k)
        if (index & (std::uint64_t{1} << (n_qubits - 1 - k))) bits[static_cast<std::size_t>(k)] = '1';
    return bits;
}

std::vector<int> outcome_multi_index(std::uint64_t index, int n, int N) {
    std::vector<int> multi(static_cast<std::size_t>(n));
    for (int v = n - 1; v >= 0; --v) {
        multi[static_cast<std::size_t>(v)] = static_cast<int>(index % static_cast<std::uint64_t>(N));
        index /= static_cast<std::uint64_t>(N);
    }
    return multi;
}

namespace {

double tv_distance(const StateVector& a, const StateVector& b) {
    double tv = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        tv += std::abs(std::norm(a.amps[i]) - std::norm(b.amps[i]));
    return 0.5 * tv;
}

template <class H>
ConvergenceReport convergence_impl(const H& h, const Schedule& schedule,
                                   const EvolveConfig& cfg) {
    const StateVector coarse = evolve(h, schedule, cfg);
    EvolveConfig fine = cfg;
    fine.steps = cfg.steps * 2;
    const StateVector refined = evolve(h, schedule, fine);
    ConvergenceReport report;
    report.steps = cfg.steps;
    report.tv_distance = tv_distance(coarse, refined);
    report.pass = report.tv_distance <= 1e-3;
    return report;
}

}  // namespace

ConvergenceReport convergence_check(const DiscretizedHamiltonian& dh, const Schedule& schedule,
                                    const EvolveConfig& cfg) {
    return convergence_impl(dh, schedule, cfg);
}

ConvergenceReport convergence_check(const HamiltonianIR& ir, const Schedule& schedule,
                                    const EvolveConfig& cfg) {
    return convergence_impl(ir, schedule, cfg);
}

void dump_state(const StateVector& psi, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    const std::int64_t dim = static_cast<std::int64_t>(psi.amps.size());
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    for (const auto& a : psi.amps) {
        const double re = a.real(), im = a.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(re));
        out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
}

}  // namespace qhdkit
