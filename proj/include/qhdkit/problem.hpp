#pragma once

#include <span>
#include <vector>

#include "qhdkit/expr.hpp"

namespace qhdkit {

/// Per-variable box [lower, upper) with lower strictly below upper.
struct BoxBounds {
    struct Interval {
        double lower, upper;
    };
    std::vector<Interval> intervals;

    static BoxBounds unit(int n);
    int size() const { return static_cast<int>(intervals.size()); }
    bool is_unit() const;
    void validate() const;  // throws on lower >= upper
};

/// Symmetric quadratic-program data: f(x) = 1/2 x^T Q x + b^T x.
struct QPData {
    std::vector<std::vector<double>> Q;  // n x n, symmetric (validated)
    std::vector<double> b;               // n

    int size() const { return static_cast<int>(b.size()); }
    void validate() const;  // exact symmetry and dimension checks
};

/// Affine map from working coordinates u to original coordinates
/// x = offset + scale * u.
struct AffineMap {
    double scale = 1.0;
    double offset = 0.0;
};

/// An optimization problem: separable objective over box bounds, with
/// the record of the substitution that maps working coordinates back to
/// the user's original ones.
struct Problem {
    SeparableObjective objective;        // in working coordinates
    BoxBounds bounds;                    // working bounds
    std::vector<AffineMap> to_original;  // x_orig = offset + scale * u

    int dimension() const { return objective.n; }

    /// Working -> original coordinates.
    std::vector<double> unnormalize(std::span<const double> u) const;
    /// Original -> working coordinates.
    std::vector<double> normalize(std::span<const double> x) const;

    double operator()(std::span<const double> u) const { return objective(u); }
};

/// Build a problem from QP matrices: g_i = 1/2 Q_ii x_i^2 + b_i x_i plus
/// one bivariate pair (Q_kl x_k) * x_l per nonzero upper-triangular Q_kl.
Problem from_qp(const QPData& qp, const BoxBounds& bounds);

/// Build a problem from a symbolic objective; separability errors from
/// extract_separable propagate.
Problem from_expr(const Expr& e, const BoxBounds& bounds);
Problem from_expr(const Expr& e, int n, const BoxBounds& bounds);

/// Rewrite the objective onto the unit box via the substitution
/// x_i <- L_i + (U_i - L_i) u_i. Separable structure is preserved; the
/// returned problem's to_original map composes with any existing one.
Problem normalize_to_unit_box(const Problem& p);

}  // namespace qhdkit
