#pragma once

#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qhdkit/errors.hpp"

namespace qhdkit {

/// Immutable symbolic expression tree over real-valued variables.
///
/// Node kinds: constant, variable (by dense index), unary ops
/// {neg, exp, log, sqrt} and binary ops {add, sub, mul, div, pow}.
/// The pow exponent is restricted to a real constant. Smart
/// constructors fold constants so that no node has all-constant
/// children, and apply the usual unit/zero identities.
class Expr {
public:
    enum class Kind { Constant, Variable, Unary, Binary };
    enum class UnaryOp { Neg, Exp, Log, Sqrt };
    enum class BinaryOp { Add, Sub, Mul, Div, Pow };

    struct Node {
        Kind kind;
        double value = 0.0;  // Constant payload, or the pow exponent
        int var = -1;
        UnaryOp uop = UnaryOp::Neg;
        BinaryOp bop = BinaryOp::Add;
        std::shared_ptr<const Node> lhs, rhs;  // rhs unset for Unary and Pow
    };

    Expr() = default;

    static Expr constant(double c);
    static Expr variable(int index);
    static Expr neg(const Expr& e);
    static Expr exp(const Expr& e);
    static Expr log(const Expr& e);
    static Expr sqrt(const Expr& e);
    static Expr add(const Expr& a, const Expr& b);
    static Expr sub(const Expr& a, const Expr& b);
    static Expr mul(const Expr& a, const Expr& b);
    static Expr div(const Expr& a, const Expr& b);
    static Expr pow(const Expr& base, double exponent);

    bool valid() const { return node_ != nullptr; }
    const Node& node() const { return *node_; }
    Kind kind() const { return node_->kind; }
    Expr lhs() const { return Expr(node_->lhs); }
    Expr rhs() const { return Expr(node_->rhs); }

    bool is_constant() const { return valid() && node_->kind == Kind::Constant; }
    double constant_value() const { return node_->value; }

    /// All variable indices referenced by the tree.
    std::set<int> variables() const;
    /// max referenced index + 1 (0 for constant expressions).
    int variable_count() const;

    /// Render to a string parseable by parse() (given matching names).
    std::string to_string(std::span<const std::string> var_names = {}) const;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Node n);
    std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Parse `text` against the expression grammar, binding identifiers
/// positionally to indices in `var_names`. Throws ParseError with a
/// byte position on malformed input or unknown identifiers.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' number)?
///   base   := number | ident | func '(' expr ')' | '(' expr ')'
///   func   := 'exp' | 'log' | 'sqrt'
///
/// Unary minus binds looser than '^' so that -x^2 reads as -(x^2).
Expr parse(const std::string& text, const std::vector<std::string>& var_names);

/// IEEE double evaluation. Domain violations throw DomainError rather
/// than returning NaN.
double eval(const Expr& e, std::span<const double> x);

/// Symbolic partial derivative with respect to variable `index`,
/// normalized by constant folding.
Expr differentiate(const Expr& e, int index);

/// Replace every occurrence of variable `index` with `replacement`.
Expr substitute(const Expr& e, int index, const Expr& replacement);

/// Objective decomposed as  constant + sum_i g_i(x_i) + sum_j p_j(x_kj) * q_j(x_lj).
struct SeparableObjective {
    struct Univariate {
        int var;
        Expr g;  // references exactly var
    };
    struct Bivariate {
        int var_a, var_b;  // var_a < var_b
        Expr p, q;         // p references var_a only, q references var_b only
    };

    int n = 0;
    double constant = 0.0;
    std::vector<Univariate> univariate;  // at most one entry per variable
    std::vector<Bivariate> bivariate;

    std::size_t m() const { return bivariate.size(); }

    /// Sum all parts back into a single expression.
    Expr reassemble() const;

    /// Direct evaluation without reassembling.
    double operator()(std::span<const double> x) const;
};

/// Decompose `e` over `n` variables into SeparableObjective form.
/// Multi-variable sums and integer powers of sums are expanded just
/// enough to factor each additive term; single-variable structure is
/// kept intact. Throws NotSeparableError when a term references three
/// or more variables or contains an irreducible two-variable factor.
SeparableObjective extract_separable(const Expr& e, int n);

}  // namespace qhdkit
