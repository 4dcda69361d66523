#pragma once

#include <span>
#include <vector>

#include "qhdkit/problem.hpp"

namespace qhdkit {

/// Caches the symbolic first and second derivatives of a separable
/// objective so repeated gradient/Hessian-vector evaluations avoid
/// re-differentiating. Immutable after construction.
class ObjectiveEvaluator {
public:
    explicit ObjectiveEvaluator(const SeparableObjective& obj);

    int dimension() const { return obj_.n; }
    double value(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const;
    std::vector<double> hessian_vector(std::span<const double> x,
                                       std::span<const double> v) const;

private:
    SeparableObjective obj_;
    std::vector<Expr> dg_, d2g_;          // aligned with obj_.univariate
    std::vector<Expr> dp_, d2p_, dq_, d2q_;  // aligned with obj_.bivariate
};

enum class RefineMethod { ProjectedGradient, TruncatedNewton };

struct RefineConfig {
    RefineMethod method = RefineMethod::ProjectedGradient;
    double tol = 1e-8;       // projected-gradient-norm threshold
    int max_iters = 500;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double initial_step = 1.0;
};

struct RefinementResult {
    std::vector<double> x;        // within [0,1]^n exactly
    std::vector<double> x_start;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Box-constrained local descent from x0 in unit-box coordinates.
/// The objective never increases across iterates and every iterate is
/// clipped exactly to [0,1]^n. Non-convergence is reported via the flag.
RefinementResult refine(const Problem& p, std::span<const double> x0,
                        const RefineConfig& cfg = {});
RefinementResult refine(const ObjectiveEvaluator& f, std::span<const double> x0,
                        const RefineConfig& cfg = {});

/// Action of the objective Hessian at x on v; exact Q*v for QP objectives.
std::vector<double> hessian_vector(const Problem& p, std::span<const double> x,
                                   std::span<const double> v);

}  // namespace qhdkit
