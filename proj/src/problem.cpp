#include "qhdkit/problem.hpp"

#include <cmath>

namespace qhdkit {

BoxBounds BoxBounds::unit(int n) {
    BoxBounds b;
    b.intervals.assign(static_cast<std::size_t>(n), {0.0, 1.0});
    return b;
}

bool BoxBounds::is_unit() const {
    for (const auto& iv : intervals)
        if (iv.lower != 0.0 || iv.upper != 1.0) return false;
    return true;
}

void BoxBounds::validate() const {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].lower < intervals[i].upper))
            throw Error("invalid bounds for variable " + std::to_string(i) +
                        ": lower must be strictly below upper");
        if (!std::isfinite(intervals[i].lower) || !std::isfinite(intervals[i].upper))
            throw Error("bounds must be finite");
    }
}

void QPData::validate() const {
    const std::size_t n = b.size();
    if (Q.size() != n)
        throw Error("QP dimension mismatch: Q has " + std::to_string(Q.size()) +
                    " rows, b has " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i)
        if (Q[i].size() != n)
            throw Error("QP matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (Q[i][j] != Q[j][i])
                throw Error("QP matrix is not symmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
}

std::vector<double> Problem::unnormalize(std::span<const double> u) const {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        x[i] = to_original[i].offset + to_original[i].scale * u[i];
    return x;
}

std::vector<double> Problem::normalize(std::span<const double> x) const {
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        u[i] = (x[i] - to_original[i].offset) / to_original[i].scale;
    return u;
}

Problem from_qp(const QPData& qp, const BoxBounds& bounds) {
    qp.validate();
    bounds.validate();
    const int n = qp.size();
    if (bounds.size() != n) throw Error("bounds dimension mismatch");

    SeparableObjective obj;
    obj.n = n;
    for (int i = 0; i < n; ++i) {
        const double qii = qp.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        const double bi = qp.b[static_cast<std::size_t>(i)];
        Expr xi = Expr::variable(i);
        Expr g = Expr::constant(0.5 * qii) * Expr::pow(xi, 2.0) + Expr::constant(bi) * xi;
        if (!(g.is_constant() && g.constant_value() == 0.0)) obj.univariate.push_back({i, g});
    }
    for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
            const double qkl = qp.Q[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            if (qkl == 0.0) continue;
            SeparableObjective::Bivariate bv;
            bv.var_a = k;
            bv.var_b = l;
            bv.p = Expr::constant(qkl) * Expr::variable(k);
            bv.q = Expr::variable(l);
            obj.bivariate.push_back(std::move(bv));
        }
    }

    Problem p;
    p.objective = std::move(obj);
    p.bounds = bounds;
    p.to_original.assign(static_cast<std::size_t>(n), AffineMap{});
    return p;
}

Problem from_expr(const Expr& e, const BoxBounds& bounds) {
    return from_expr(e, bounds.size(), bounds);
}

Problem from_expr(const Expr& e, int n, const BoxBounds& bounds) {
    bounds.validate();
    if (bounds.size() != n) throw Error("bounds dimension mismatch");
    Problem p;
    p.objective = extract_separable(e, n);
    p.bounds = bounds;
    p.to_original.assign(static_cast<std::size_t>(n), AffineMap{});
    return p;
}

namespace {

Expr substitute_affine(const Expr& g, int var, const AffineMap& map) {
    Expr repl = Expr::constant(map.offset) +
                Expr::constant(map.scale) * Expr::variable(var);
    return substitute(g, var, repl);
}

}  // namespace

Problem normalize_to_unit_box(const Problem& p) {
    p.bounds.validate();
    const int n = p.dimension();

    std::vector<AffineMap> step(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& iv = p.bounds.intervals[static_cast<std::size_t>(i)];
        step[static_cast<std::size_t>(i)] = {iv.upper - iv.lower, iv.lower};
    }

    SeparableObjective obj;
    obj.n = n;
    obj.constant = p.objective.constant;
    for (const auto& u : p.objective.univariate)
        obj.univariate.push_back({u.var, substitute_affine(u.g, u.var, step[static_cast<std::size_t>(u.var)])});
    for (const auto& b : p.objective.bivariate) {
        SeparableObjective::Bivariate nb;
        nb.var_a = b.var_a;
        nb.var_b = b.var_b;
        nb.p = substitute_affine(b.p, b.var_a, step[static_cast<std::size_t>(b.var_a)]);
        nb.q = substitute_affine(b.q, b.var_b, step[static_cast<std::size_t>(b.var_b)]);
        obj.bivariate.push_back(std::move(nb));
    }

    Problem out;
    out.objective = std::move(obj);
    out.bounds = BoxBounds::unit(n);
    out.to_original.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // compose: x_orig = prev(step(u)) = prev.offset + prev.scale*(step.offset + step.scale*u)
        const auto& prev = p.to_original[static_cast<std::size_t>(i)];
        const auto& s = step[static_cast<std::size_t>(i)];
        out.to_original[static_cast<std::size_t>(i)] = {prev.scale * s.scale,
                                                        prev.offset + prev.scale * s.offset};
    }
    return out;
}

}  // namespace qhdkit
