#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qhdkit/problem.hpp"

using namespace qhdkit;

namespace {

QPData demo_qp_data() {
    QPData qp;
    qp.Q = {{-2.0, 1.0}, {1.0, -1.0}};
    qp.b = {0.75, -0.25};
    return qp;
}

}  // namespace

TEST_CASE("from_qp reproduces the demo objective pointwise") {
    Problem p = from_qp(demo_qp_data(), BoxBounds::unit(2));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = oracles::random_interior_point(rng, 2, 0.0);
        CHECK(p(x) == doctest::Approx(oracles::demo_qp(x)).epsilon(1e-13));
    }
    CHECK(p(std::vector<double>{0.0, 1.0}) == doctest::Approx(-0.75));
}

TEST_CASE("from_qp zero matrices give the constant-zero objective") {
    QPData qp;
    qp.Q = {{0.0, 0.0}, {0.0, 0.0}};
    qp.b = {0.0, 0.0};
    Problem p = from_qp(qp, BoxBounds::unit(2));
    CHECK(p.objective.m() == 0);
    CHECK(p.objective.univariate.empty());
    CHECK(p(std::vector<double>{0.3, 0.8}) == 0.0);
}

TEST_CASE("from_qp on a random sparse symmetric matrix") {
    // seeded draw, then compare the decomposition against direct matrix
    // arithmetic
    const int n = 6;
    std::mt19937_64 rng(7);
    auto u = [&rng]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    QPData qp;
    qp.Q.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) qp.Q[i][i] = u();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u() > 0.0) qp.Q[i][j] = qp.Q[j][i] = u();
    qp.b.resize(n);
    for (auto& bi : qp.b) bi = u();

    Problem p = from_qp(qp, BoxBounds::unit(n));
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(n);
        for (auto& xi : x) xi = 0.5 * (u() + 1.0);
        double direct = 0.0;
        for (int i = 0; i < n; ++i) {
            direct += qp.b[i] * x[i];
            for (int j = 0; j < n; ++j) direct += 0.5 * qp.Q[i][j] * x[i] * x[j];
        }
        CHECK(std::abs(p(x) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("from_qp validation") {
    QPData bad = demo_qp_data();
    bad.Q[0][1] = 2.0;  // breaks symmetry
    CHECK_THROWS_AS(from_qp(bad, BoxBounds::unit(2)), Error);

    QPData mismatched = demo_qp_data();
    mismatched.b.push_back(1.0);
    CHECK_THROWS_AS(from_qp(mismatched, BoxBounds::unit(3)), Error);

    BoxBounds degenerate = BoxBounds::unit(2);
    degenerate.intervals[1] = {0.5, 0.5};
    CHECK_THROWS_AS(from_qp(demo_qp_data(), degenerate), Error);
}

TEST_CASE("from_expr keeps the three bivariate pairs of the 3-variable instance") {
    Expr e = parse("(2*y - 1)^2*(z - 2/5) - (2*x - 1)*z + y*(2*x - 3/2)^2",
                   {"x", "y", "z"});
    Problem p = from_expr(e, BoxBounds::unit(3));
    CHECK(p.objective.m() == 3);
    std::set<std::pair<int, int>> pairs;
    for (const auto& b : p.objective.bivariate) pairs.insert({b.var_a, b.var_b});
    CHECK(pairs == std::set<std::pair<int, int>>{{1, 2}, {0, 2}, {0, 1}});

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = oracles::random_interior_point(rng, 3, 0.0);
        CHECK(p(x) == doctest::Approx(oracles::nlp4(x)).epsilon(1e-12));
    }
}

TEST_CASE("from_expr single-variable objective has no bivariate part") {
    Problem p = from_expr(parse("x^2 - x", {"x"}), BoxBounds::unit(1));
    CHECK(p.objective.m() == 0);
    CHECK(p.objective.univariate.size() == 1);
}

TEST_CASE("from_expr on the exponential family form") {
    // hand-written 3-variable instance of the 1/2 sum Q_ij e^{x_i} e^{x_j} +
    // sum b_i e^{-x_i} family
    const double Q[3][3] = {{0.8, -0.4, 0.0}, {-0.4, -0.6, 0.25}, {0.0, 0.25, 1.1}};
    const double b[3] = {0.3, -0.9, 0.5};
    const std::string text =
        "0.5*(0.8*exp(x)*exp(x) - 0.4*exp(x)*exp(y) - 0.4*exp(y)*exp(x)"
        " - 0.6*exp(y)*exp(y) + 0.25*exp(y)*exp(z) + 0.25*exp(z)*exp(y)"
        " + 1.1*exp(z)*exp(z))"
        " + 0.3*exp(-x) - 0.9*exp(-y) + 0.5*exp(-z)";
    Problem p = from_expr(parse(text, {"x", "y", "z"}), BoxBounds::unit(3));

    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = oracles::random_interior_point(rng, 3, 0.0);
        double direct = 0.0;
        for (int i = 0; i < 3; ++i) {
            direct += b[i] * std::exp(-x[static_cast<std::size_t>(i)]);
            for (int j = 0; j < 3; ++j)
                direct += 0.5 * Q[i][j] * std::exp(x[static_cast<std::size_t>(i)]) *
                          std::exp(x[static_cast<std::size_t>(j)]);
        }
        CHECK(p(x) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("normalize on the unit box is the identity transform") {
    Problem p = from_qp(demo_qp_data(), BoxBounds::unit(2));
    Problem q = normalize_to_unit_box(p);
    CHECK(q.to_original[0].scale == 1.0);
    CHECK(q.to_original[0].offset == 0.0);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = oracles::random_interior_point(rng, 2, 0.0);
        CHECK(q(x) == doctest::Approx(p(x)).epsilon(1e-13));
    }
}

TEST_CASE("normalize maps symmetric bounds correctly") {
    // f(x) = x^2 on [-1,1]: normalized objective is (2u-1)^2 with the
    // minimizer at u = 1/2 mapping back to x = 0
    BoxBounds bounds;
    bounds.intervals = {{-1.0, 1.0}};
    Problem p = from_expr(parse("x^2", {"x"}), bounds);
    Problem q = normalize_to_unit_box(p);
    CHECK(q(std::vector<double>{0.5}) == doctest::Approx(0.0));
    CHECK(q(std::vector<double>{0.0}) == doctest::Approx(1.0));
    CHECK(q(std::vector<double>{1.0}) == doctest::Approx(1.0));
    const auto back = q.unnormalize(std::vector<double>{0.5});
    CHECK(back[0] == doctest::Approx(0.0));
}

TEST_CASE("objective equality through normalization on general bounds") {
    BoxBounds bounds;
    bounds.intervals = {{-2.0, 3.0}, {0.5, 1.5}};
    Expr e = parse("-4*x^2 + 3*x*y - 2*y^2 + 3*x - y", {"x", "y"});
    Problem p = from_expr(e, bounds);
    Problem q = normalize_to_unit_box(p);

    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(2);
        for (int i = 0; i < 2; ++i) {
            const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const auto& iv = bounds.intervals[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] = iv.lower + (iv.upper - iv.lower) * u01;
        }
        const auto u = q.normalize(x);
        CHECK(std::abs(p(x) - q(u)) <= 1e-10 * std::max(1.0, std::abs(p(x))));
        const auto round = q.unnormalize(u);
        CHECK(std::abs(round[0] - x[0]) <= 1e-14 * std::max(1.0, std::abs(x[0])));
        CHECK(std::abs(round[1] - x[1]) <= 1e-14 * std::max(1.0, std::abs(x[1])));
    }
}

TEST_CASE("separability is preserved by the affine substitution") {
    BoxBounds bounds;
    bounds.intervals = {{-1.0, 2.0}, {0.0, 4.0}};
    Expr e = parse("y^1.5 - exp(4*x)*(y - 0.75)", {"x", "y"});
    // fractional powers of a shifted variable stay single-variable, so
    // re-extraction of the substituted form must succeed
    Problem p = from_expr(e, bounds);
    Problem q = normalize_to_unit_box(p);
    CHECK_NOTHROW(extract_separable(q.objective.reassemble(), 2));
    CHECK(q.objective.m() == p.objective.m());
}

TEST_CASE("normalized builtin instance keeps its minimum") {
    Expr e = parse("-4*x^2 + 3*x*y - 2*y^2 + 3*x - y", {"x", "y"});
    Problem q = normalize_to_unit_box(from_expr(e, BoxBounds::unit(2)));
    // minimum of the normalized problem, from the grid + polish oracle
    auto obj = [&q](const std::vector<double>& u) { return q(u); };
    const auto res = oracles::grid_polish_min(obj, 2, 401);
    CHECK(res.f == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(res.x[0] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}
