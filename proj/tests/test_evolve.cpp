#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "qhdkit/evolve.hpp"

using namespace qhdkit;

namespace {

Problem demo_qp_problem() {
    QPData qp;
    qp.Q = {{-2.0, 1.0}, {1.0, -1.0}};
    qp.b = {0.75, -0.25};
    return normalize_to_unit_box(from_qp(qp, BoxBounds::unit(2)));
}

Problem quad_1d() {
    return normalize_to_unit_box(
        from_expr(parse("(x - 1/2)^2", {"x"}), BoxBounds::unit(1)));
}

HamiltonianIR bare_ir(int n_vars, int r) {
    HamiltonianIR ir;
    ir.scheme = Scheme::Unary;
    ir.n_vars = n_vars;
    ir.r = r;
    ir.num_qubits = n_vars * r;
    ir.grid_points = r + 1;
    ir.grid_h = 1.0 / r;
    return ir;
}

double fidelity(const StateVector& a, const Eigen::VectorXcd& b) {
    std::complex<double> inner = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        inner += std::conj(b(static_cast<Eigen::Index>(i))) * a.amps[i];
    return std::norm(inner);
}

Eigen::VectorXcd uniform_vec(std::size_t dim) {
    return Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(dim),
                                      1.0 / std::sqrt(static_cast<double>(dim)));
}

}  // namespace

TEST_CASE("initial state is the uniform superposition") {
    const StateVector s4 = initial_state(4);
    for (const auto& a : s4.amps) CHECK(a == std::complex<double>(0.5, 0.0));

    const StateVector s1 = initial_state(1);
    CHECK(s1.amps[0] == std::complex<double>(1.0, 0.0));

    const StateVector big = initial_state(std::size_t{1} << 12);
    CHECK(std::abs(big.norm() - 1.0) <= 1e-15);
}

TEST_CASE("zero Hamiltonian leaves the state untouched") {
    const HamiltonianIR ir = bare_ir(1, 3);  // no terms at all
    EvolveConfig cfg;
    cfg.steps = 50;
    const StateVector out = evolve(ir, Schedule::smooth_log(1.0, 10.0), cfg);
    const StateVector init = initial_state(out.amps.size());
    for (std::size_t i = 0; i < out.amps.size(); ++i) CHECK(out.amps[i] == init.amps[i]);
}

TEST_CASE("diagonal-only evolution changes phases, not probabilities") {
    HamiltonianIR ir = bare_ir(1, 3);
    PauliTerm t;
    t.coeff = 2.5;
    t.factors = {{0, SiteOp::Num}};
    ir.potential.push_back(t);
    ir.offset = -0.5;

    EvolveConfig cfg;
    cfg.steps = 100;
    const StateVector out = evolve(ir, Schedule::smooth_log(1.0, 10.0), cfg);
    const double expected = 1.0 / out.amps.size();
    for (const auto& p : out.probabilities()) CHECK(std::abs(p - expected) <= 1e-12);
}

TEST_CASE("late-time state peaks at the 1D minimizer") {
    const DiscretizedHamiltonian dh = assemble_discretized(quad_1d(), 17);
    EvolveConfig cfg;  // shipped defaults: 400 steps
    const StateVector out = evolve(dh, Schedule::smooth_log(1.0, 10.0), cfg);
    const auto probs = out.probabilities();
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    const double x_peak = dh.grid.node(static_cast<int>(peak));
    CHECK(std::abs(x_peak - 0.5) <= dh.grid.h + 1e-12);
    CHECK(std::abs(out.norm() - 1.0) <= 1e-8);
}

TEST_CASE("direct integrator matches the dense-exponential reference") {
    const Schedule sched = Schedule::smooth_log(1.0, 10.0);

    SUBCASE("one dimension, 33 nodes") {
        const DiscretizedHamiltonian dh = assemble_discretized(quad_1d(), 33);
        EvolveConfig cfg;
        cfg.steps = 800;
        const StateVector mine = evolve(dh, sched, cfg);

        const Eigen::MatrixXcd K = materialize(dh, 1.0, 0.0).cast<std::complex<double>>();
        const Eigen::MatrixXcd V = materialize(dh, 0.0, 1.0).cast<std::complex<double>>();
        auto H = [&](double t) -> Eigen::MatrixXcd {
            return sched.kinetic_coeff(t) * K + sched.potential_coeff(t) * V;
        };
        const auto ref = oracles::reference_evolve(H, 10.0, cfg.steps * 10,
                                                   uniform_vec(dh.dimension()));
        CHECK(fidelity(mine, ref) >= 1.0 - 1e-6);
    }

    SUBCASE("two dimensions, 8 nodes each") {
        const DiscretizedHamiltonian dh = assemble_discretized(demo_qp_problem(), 8);
        EvolveConfig cfg;
        cfg.steps = 800;
        const StateVector mine = evolve(dh, sched, cfg);

        const Eigen::MatrixXcd K = materialize(dh, 1.0, 0.0).cast<std::complex<double>>();
        const Eigen::MatrixXcd V = materialize(dh, 0.0, 1.0).cast<std::complex<double>>();
        auto H = [&](double t) -> Eigen::MatrixXcd {
            return sched.kinetic_coeff(t) * K + sched.potential_coeff(t) * V;
        };
        const auto ref = oracles::reference_evolve(H, 10.0, cfg.steps * 10,
                                                   uniform_vec(dh.dimension()));
        CHECK(fidelity(mine, ref) >= 1.0 - 1e-6);
    }
}

TEST_CASE("embedded integrator matches the dense-exponential reference") {
    const Schedule sched = Schedule::smooth_log(1.0, 10.0);
    struct Case {
        const char* label;
        Scheme scheme;
        bool qp;
        int N;
    };
    // every case stays at dimension 64
    const std::vector<Case> cases = {
        {"unary", Scheme::Unary, true, 4},      // 2 vars * r=3
        {"onehot", Scheme::OneHot, false, 6},   // 1 var * r=6
        {"hamming", Scheme::Hamming, true, 4},  // 2 vars * r=3
    };
    for (const auto& c : cases) {
        const Problem p = c.qp ? demo_qp_problem() : quad_1d();
        const DiscretizedHamiltonian dh = assemble_discretized(p, c.N);
        const HamiltonianIR ir = assemble_embedding(dh, c.scheme);
        REQUIRE(ir.num_qubits == 6);

        EvolveConfig cfg;
        cfg.steps = 400;
        const StateVector mine = evolve(ir, sched, cfg);

        auto H = [&](double t) { return oracles::ir_dense(ir, t, sched); };
        const auto ref = oracles::reference_evolve(H, 10.0, cfg.steps * 10,
                                                   uniform_vec(std::size_t{1} << 6));
        INFO(c.label);
        CHECK(fidelity(mine, ref) >= 1.0 - 1e-6);
        CHECK(std::abs(mine.norm() - 1.0) <= 1e-8);
    }
}

TEST_CASE("sampling basics") {
    SUBCASE("deterministic state yields identical shots") {
        StateVector psi;
        psi.amps = {0.0, 0.0, 1.0, 0.0};
        const auto shots = sample(psi, 32, 7);
        for (auto s : shots) CHECK(s == 2);
    }

    SUBCASE("uniform two-outcome frequencies stay within the binomial bound") {
        StateVector psi;
        const double a = 1.0 / std::sqrt(2.0);
        psi.amps = {a, a};
        const int shots = 100000;
        const auto outcomes = sample(psi, shots, 1);
        int ones = 0;
        for (auto s : outcomes) ones += (s == 1);
        const double freq = static_cast<double>(ones) / shots;
        const double sigma = std::sqrt(0.25 / shots);
        CHECK(std::abs(freq - 0.5) <= 3.0 * sigma);
    }

    SUBCASE("same seed, same sequence") {
        StateVector psi = initial_state(16);
        const auto a = sample(psi, 500, 42);
        const auto b = sample(psi, 500, 42);
        CHECK(a == b);
        const auto c = sample(psi, 500, 43);
        CHECK(a != c);
    }
}

TEST_CASE("convergence check") {
    SUBCASE("zero Hamiltonian has zero TV distance") {
        const HamiltonianIR ir = bare_ir(1, 3);
        EvolveConfig cfg;
        cfg.steps = 10;
        const auto report = convergence_check(ir, Schedule::smooth_log(1.0, 10.0), cfg);
        CHECK(report.tv_distance == 0.0);
        CHECK(report.pass);
    }

    SUBCASE("shipped defaults pass on the embedded demo QP") {
        const DiscretizedHamiltonian dh = assemble_discretized(demo_qp_problem(), 6);
        const HamiltonianIR ir = assemble_embedding(dh, Scheme::Unary);
        EvolveConfig cfg;  // 400 steps
        const auto report = convergence_check(ir, Schedule::smooth_log(1.0, 10.0), cfg);
        CHECK(report.pass);
    }

    SUBCASE("two steps on the same instance fail the gate") {
        const DiscretizedHamiltonian dh = assemble_discretized(demo_qp_problem(), 6);
        const HamiltonianIR ir = assemble_embedding(dh, Scheme::Unary);
        EvolveConfig cfg;
        cfg.steps = 2;
        const auto report = convergence_check(ir, Schedule::smooth_log(1.0, 10.0), cfg);
        CHECK_FALSE(report.pass);
    }
}

TEST_CASE("dimension caps abort the run") {
    const DiscretizedHamiltonian dh = assemble_discretized(demo_qp_problem(), 33);
    EvolveConfig cfg;
    cfg.direct_cap = 1000;  // 33^2 = 1089
    CHECK_THROWS_AS(evolve(dh, Schedule::smooth_log(1.0, 10.0), cfg), DimensionCapExceeded);

    const DiscretizedHamiltonian small = assemble_discretized(demo_qp_problem(), 6);
    const HamiltonianIR ir = assemble_embedding(small, Scheme::Unary);
    EvolveConfig ecfg;
    ecfg.embedded_cap = 512;  // 2^10 needed
    CHECK_THROWS_AS(evolve(ir, Schedule::smooth_log(1.0, 10.0), ecfg), DimensionCapExceeded);
}

TEST_CASE("smooth schedule dissipates kinetic weight monotonically") {
    const Schedule s = Schedule::smooth_log(1.0, 10.0);
    double prev_kin = s.kinetic_coeff(0.0);
    double prev_pot = s.potential_coeff(0.0);
    double prev_ratio = prev_kin / prev_pot;
    for (int i = 1; i <= 100; ++i) {
        const double t = 10.0 * i / 100.0;
        const double kin = s.kinetic_coeff(t);
        const double pot = s.potential_coeff(t);
        CHECK(kin < prev_kin);
        CHECK(pot > prev_pot);
        CHECK(kin / pot < prev_ratio);
        prev_kin = kin;
        prev_pot = pot;
        prev_ratio = kin / pot;
    }
    // smooth product identity: e^phi * e^chi = 1
    for (double t : {0.0, 1.7, 5.0, 10.0})
        CHECK(s.kinetic_coeff(t) * s.potential_coeff(t) == doctest::Approx(1.0));
}

TEST_CASE("piecewise-linear schedules interpolate their breakpoints") {
    const Schedule s = Schedule::piecewise_linear({{0.0, 0.0, -2.0}, {5.0, -1.0, 0.0}, {10.0, -3.0, 1.0}});
    CHECK(s.total_time() == 10.0);
    CHECK(s.phi(0.0) == 0.0);
    CHECK(s.phi(5.0) == -1.0);
    CHECK(s.phi(2.5) == doctest::Approx(-0.5));
    CHECK(s.chi(7.5) == doctest::Approx(0.5));
    CHECK(s.phi(12.0) == -3.0);  // clamped past the end

    CHECK_THROWS_AS(Schedule::piecewise_linear({{0.0, 0.0, 0.0}}), Error);
    CHECK_THROWS_AS(Schedule::piecewise_linear({{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}}), Error);
    CHECK_THROWS_AS(Schedule::smooth_log(-1.0, 10.0), Error);
}

TEST_CASE("evolution is deterministic") {
    const DiscretizedHamiltonian dh = assemble_discretized(demo_qp_problem(), 6);
    const HamiltonianIR ir = assemble_embedding(dh, Scheme::Unary);
    EvolveConfig cfg;
    cfg.steps = 100;
    const StateVector a = evolve(ir, Schedule::smooth_log(1.0, 10.0), cfg);
    const StateVector b = evolve(ir, Schedule::smooth_log(1.0, 10.0), cfg);
    CHECK(a.amps == b.amps);
    CHECK(sample(a, 100, 5) == sample(b, 100, 5));
}
