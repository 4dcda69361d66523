#include "qhdkit/refine.hpp"

#include <cmath>

namespace qhdkit {

ObjectiveEvaluator::ObjectiveEvaluator(const SeparableObjective& obj) : obj_(obj) {
    dg_.reserve(obj_.univariate.size());
    d2g_.reserve(obj_.univariate.size());
    for (const auto& u : obj_.univariate) {
        dg_.push_back(differentiate(u.g, u.var));
        d2g_.push_back(differentiate(dg_.back(), u.var));
    }
    dp_.reserve(obj_.bivariate.size());
    for (const auto& b : obj_.bivariate) {
        dp_.push_back(differentiate(b.p, b.var_a));
        d2p_.push_back(differentiate(dp_.back(), b.var_a));
        dq_.push_back(differentiate(b.q, b.var_b));
        d2q_.push_back(differentiate(dq_.back(), b.var_b));
    }
}

double ObjectiveEvaluator::value(std::span<const double> x) const { return obj_(x); }

std::vector<double> ObjectiveEvaluator::gradient(std::span<const double> x) const {
    std::vector<double> g(static_cast<std::size_t>(obj_.n), 0.0);
    for (std::size_t i = 0; i < obj_.univariate.size(); ++i)
        g[static_cast<std::size_t>(obj_.univariate[i].var)] += eval(dg_[i], x);
    for (std::size_t j = 0; j < obj_.bivariate.size(); ++j) {
        const auto& b = obj_.bivariate[j];
        const double pv = eval(b.p, x), qv = eval(b.q, x);
        g[static_cast<std::size_t>(b.var_a)] += eval(dp_[j], x) * qv;
        g[static_cast<std::size_t>(b.var_b)] += pv * eval(dq_[j], x);
    }
    return g;
}

std::vector<double> ObjectiveEvaluator::hessian_vector(std::span<const double> x,
                                                       std::span<const double> v) const {
    std::vector<double> hv(static_cast<std::size_t>(obj_.n), 0.0);
    for (std::size_t i = 0; i < obj_.univariate.size(); ++i) {
        const auto var = static_cast<std::size_t>(obj_.univariate[i].var);
        hv[var] += eval(d2g_[i], x) * v[var];
    }
    for (std::size_t j = 0; j < obj_.bivariate.size(); ++j) {
        const auto& b = obj_.bivariate[j];
        const auto a = static_cast<std::size_t>(b.var_a);
        const auto c = static_cast<std::size_t>(b.var_b);
        const double pv = eval(b.p, x), qv = eval(b.q, x);
        const double dpv = eval(dp_[j], x), dqv = eval(dq_[j], x);
        hv[a] += eval(d2p_[j], x) * qv * v[a] + dpv * dqv * v[c];
        hv[c] += dpv * dqv * v[a] + pv * eval(d2q_[j], x) * v[c];
    }
    return hv;
}

namespace {

void clip_unit(std::vector<double>& x) {
    for (auto& xi : x) xi = std::min(1.0, std::max(0.0, xi));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double projected_gradient_norm(const std::vector<double>& x, const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double moved = std::min(1.0, std::max(0.0, x[i] - g[i]));
        s += (x[i] - moved) * (x[i] - moved);
    }
    return std::sqrt(s);
}

// Backtracking line search along direction d from (x, fx); returns true and
// updates x, fx on success. Domain failures shrink the step like an
// insufficient decrease would.
bool armijo_step(const ObjectiveEvaluator& f, const RefineConfig& cfg,
                 std::vector<double>& x, double& fx, const std::vector<double>& g,
                 const std::vector<double>& d) {
    double alpha = cfg.initial_step;
    while (alpha > 1e-18) {
        std::vector<double> xc(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) xc[i] = x[i] + alpha * d[i];
        clip_unit(xc);
        std::vector<double> step(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) step[i] = xc[i] - x[i];
        if (dot(step, step) == 0.0) return false;  // direction fully clipped away
        double fc;
        try {
            fc = f.value(xc);
        } catch (const DomainError&) {
            alpha *= cfg.backtrack;
            continue;
        }
        if (fc <= fx + cfg.armijo_c * dot(g, step)) {
            x = std::move(xc);
            fx = fc;
            return true;
        }
        alpha *= cfg.backtrack;
    }
    return false;
}

// Conjugate-gradient solve of H d = -g restricted to the free variables,
// truncated on negative curvature. Falls back to -g when the first
// curvature test fails.
std::vector<double> newton_direction(const ObjectiveEvaluator& f,
                                     const std::vector<double>& x,
                                     const std::vector<double>& g) {
    const std::size_t n = x.size();
    std::vector<bool> free_var(n);
    for (std::size_t i = 0; i < n; ++i)
        free_var[i] = !((x[i] <= 0.0 && g[i] > 0.0) || (x[i] >= 1.0 && g[i] < 0.0));

    std::vector<double> d(n, 0.0), r(n, 0.0), p(n, 0.0);
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!free_var[i]) continue;
        r[i] = -g[i];
        p[i] = r[i];
        rr += r[i] * r[i];
    }
    const double g_norm = std::sqrt(rr);
    if (g_norm == 0.0) return d;
    const double tol = std::min(0.5, std::sqrt(g_norm)) * g_norm;
    const int max_cg = static_cast<int>(2 * n) + 5;

    for (int it = 0; it < max_cg; ++it) {
        std::vector<double> hp;
        try {
            hp = f.hessian_vector(x, p);
        } catch (const DomainError&) {
            break;  // curvature unavailable here; use what we have
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!free_var[i]) hp[i] = 0.0;
        const double php = dot(p, hp);
        if (php <= 1e-14 * dot(p, p)) break;  // non-positive curvature: truncate
        const double alpha = rr / php;
        for (std::size_t i = 0; i < n; ++i) d[i] += alpha * p[i];
        double rr_next = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r[i] -= alpha * hp[i];
            rr_next += r[i] * r[i];
        }
        if (std::sqrt(rr_next) <= tol) break;
        const double beta = rr_next / rr;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_next;
    }
    if (dot(d, d) == 0.0)
        for (std::size_t i = 0; i < n; ++i) d[i] = free_var[i] ? -g[i] : 0.0;
    return d;
}

}  // namespace

RefinementResult refine(const ObjectiveEvaluator& f, std::span<const double> x0,
                        const RefineConfig& cfg) {
    if (static_cast<int>(x0.size()) != f.dimension())
        throw Error("start point dimension mismatch");

    RefinementResult res;
    res.x_start.assign(x0.begin(), x0.end());
    std::vector<double> x(x0.begin(), x0.end());
    clip_unit(x);
    double fx = f.value(x);

    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        std::vector<double> g;
        try {
            g = f.gradient(x);
        } catch (const DomainError&) {
            break;  // gradient undefined at a boundary point; stop here
        }
        if (projected_gradient_norm(x, g) <= cfg.tol) {
            res.converged = true;
            break;
        }
        std::vector<double> d(g.size());
        if (cfg.method == RefineMethod::TruncatedNewton) {
            d = newton_direction(f, x, g);
        } else {
            for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
        }
        bool moved = armijo_step(f, cfg, x, fx, g, d);
        if (!moved && cfg.method == RefineMethod::TruncatedNewton) {
            // retry along steepest descent before giving up
            for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
            moved = armijo_step(f, cfg, x, fx, g, d);
        }
        if (!moved) break;
    }

    res.x = std::move(x);
    res.f = fx;
    res.iterations = iter;
    return res;
}

RefinementResult refine(const Problem& p, std::span<const double> x0,
                        const RefineConfig& cfg) {
    return refine(ObjectiveEvaluator(p.objective), x0, cfg);
}

std::vector<double> hessian_vector(const Problem& p, std::span<const double> x,
                                   std::span<const double> v) {
    return ObjectiveEvaluator(p.objective).hessian_vector(x, v);
}

}  // namespace qhdkit
