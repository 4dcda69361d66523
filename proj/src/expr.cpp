#include "qhdkit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qhdkit {

namespace {

bool is_int(double v) { return std::floor(v) == v && std::abs(v) < 1e15; }

double checked_pow(double base, double expo) {
    if (base < 0.0 && !is_int(expo))
        throw DomainError("fractional power of negative base");
    if (base == 0.0 && expo < 0.0)
        throw DomainError("zero raised to a negative power");
    return std::pow(base, expo);
}

double apply_unary(Expr::UnaryOp op, double v) {
    switch (op) {
        case Expr::UnaryOp::Neg: return -v;
        case Expr::UnaryOp::Exp: return std::exp(v);
        case Expr::UnaryOp::Log:
            if (v <= 0.0) throw DomainError("log of nonpositive argument");
            return std::log(v);
        case Expr::UnaryOp::Sqrt:
            if (v < 0.0) throw DomainError("sqrt of negative argument");
            return std::sqrt(v);
    }
    return 0.0;
}

}  // namespace

Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr Expr::constant(double c) {
    Node n;
    n.kind = Kind::Constant;
    n.value = c;
    return make(std::move(n));
}

Expr Expr::variable(int index) {
    Node n;
    n.kind = Kind::Variable;
    n.var = index;
    return make(std::move(n));
}

Expr Expr::neg(const Expr& e) {
    if (e.is_constant()) return constant(-e.constant_value());
    // -(-x) = x
    if (e.kind() == Kind::Unary && e.node().uop == UnaryOp::Neg) return e.lhs();
    Node n;
    n.kind = Kind::Unary;
    n.uop = UnaryOp::Neg;
    n.lhs = e.node_;
    return make(std::move(n));
}

Expr Expr::exp(const Expr& e) {
    if (e.is_constant()) return constant(std::exp(e.constant_value()));
    Node n;
    n.kind = Kind::Unary;
    n.uop = UnaryOp::Exp;
    n.lhs = e.node_;
    return make(std::move(n));
}

Expr Expr::log(const Expr& e) {
    if (e.is_constant()) return constant(apply_unary(UnaryOp::Log, e.constant_value()));
    Node n;
    n.kind = Kind::Unary;
    n.uop = UnaryOp::Log;
    n.lhs = e.node_;
    return make(std::move(n));
}

Expr Expr::sqrt(const Expr& e) {
    if (e.is_constant()) return constant(apply_unary(UnaryOp::Sqrt, e.constant_value()));
    Node n;
    n.kind = Kind::Unary;
    n.uop = UnaryOp::Sqrt;
    n.lhs = e.node_;
    return make(std::move(n));
}

Expr Expr::add(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() + b.constant_value());
    if (a.is_constant() && a.constant_value() == 0.0) return b;
    if (b.is_constant() && b.constant_value() == 0.0) return a;
    Node n;
    n.kind = Kind::Binary;
    n.bop = BinaryOp::Add;
    n.lhs = a.node_;
    n.rhs = b.node_;
    return make(std::move(n));
}

Expr Expr::sub(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() - b.constant_value());
    if (b.is_constant() && b.constant_value() == 0.0) return a;
    if (a.is_constant() && a.constant_value() == 0.0) return neg(b);
    Node n;
    n.kind = Kind::Binary;
    n.bop = BinaryOp::Sub;
    n.lhs = a.node_;
    n.rhs = b.node_;
    return make(std::move(n));
}

Expr Expr::mul(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() * b.constant_value());
    if (a.is_constant()) {
        if (a.constant_value() == 0.0) return constant(0.0);
        if (a.constant_value() == 1.0) return b;
        if (a.constant_value() == -1.0) return neg(b);
    }
    if (b.is_constant()) {
        if (b.constant_value() == 0.0) return constant(0.0);
        if (b.constant_value() == 1.0) return a;
        if (b.constant_value() == -1.0) return neg(a);
    }
    Node n;
    n.kind = Kind::Binary;
    n.bop = BinaryOp::Mul;
    n.lhs = a.node_;
    n.rhs = b.node_;
    return make(std::move(n));
}

Expr Expr::div(const Expr& a, const Expr& b) {
    if (b.is_constant() && b.constant_value() == 0.0) throw DomainError("division by zero");
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() / b.constant_value());
    if (b.is_constant() && b.constant_value() == 1.0) return a;
    if (a.is_constant() && a.constant_value() == 0.0) return constant(0.0);
    Node n;
    n.kind = Kind::Binary;
    n.bop = BinaryOp::Div;
    n.lhs = a.node_;
    n.rhs = b.node_;
    return make(std::move(n));
}

Expr Expr::pow(const Expr& base, double exponent) {
    if (base.is_constant()) return constant(checked_pow(base.constant_value(), exponent));
    if (exponent == 0.0) return constant(1.0);
    if (exponent == 1.0) return base;
    Node n;
    n.kind = Kind::Binary;
    n.bop = BinaryOp::Pow;
    n.value = exponent;
    n.lhs = base.node_;
    return make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add(a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sub(a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul(a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::div(a, b); }
Expr operator-(const Expr& a) { return Expr::neg(a); }

namespace {

void collect_vars(const Expr& e, std::set<int>& out) {
    if (!e.valid()) return;
    const auto& n = e.node();
    switch (n.kind) {
        case Expr::Kind::Constant: return;
        case Expr::Kind::Variable: out.insert(n.var); return;
        case Expr::Kind::Unary: collect_vars(e.lhs(), out); return;
        case Expr::Kind::Binary:
            collect_vars(e.lhs(), out);
            if (n.bop != Expr::BinaryOp::Pow) collect_vars(e.rhs(), out);
            return;
    }
}

}  // namespace

std::set<int> Expr::variables() const {
    std::set<int> out;
    collect_vars(*this, out);
    return out;
}

int Expr::variable_count() const {
    auto vars = variables();
    return vars.empty() ? 0 : *vars.rbegin() + 1;
}

double eval(const Expr& e, std::span<const double> x) {
    const auto& n = e.node();
    switch (n.kind) {
        case Expr::Kind::Constant: return n.value;
        case Expr::Kind::Variable:
            if (n.var < 0 || static_cast<std::size_t>(n.var) >= x.size())
                throw Error("variable index " + std::to_string(n.var) + " out of range");
            return x[static_cast<std::size_t>(n.var)];
        case Expr::Kind::Unary: return apply_unary(n.uop, eval(e.lhs(), x));
        case Expr::Kind::Binary: {
            if (n.bop == Expr::BinaryOp::Pow) return checked_pow(eval(e.lhs(), x), n.value);
            const double a = eval(e.lhs(), x);
            const double b = eval(e.rhs(), x);
            switch (n.bop) {
                case Expr::BinaryOp::Add: return a + b;
                case Expr::BinaryOp::Sub: return a - b;
                case Expr::BinaryOp::Mul: return a * b;
                case Expr::BinaryOp::Div:
                    if (b == 0.0) throw DomainError("division by zero");
                    return a / b;
                default: return 0.0;
            }
        }
    }
    return 0.0;
}

Expr differentiate(const Expr& e, int index) {
    const auto& n = e.node();
    switch (n.kind) {
        case Expr::Kind::Constant: return Expr::constant(0.0);
        case Expr::Kind::Variable: return Expr::constant(n.var == index ? 1.0 : 0.0);
        case Expr::Kind::Unary: {
            Expr u = e.lhs();
            Expr du = differentiate(u, index);
            switch (n.uop) {
                case Expr::UnaryOp::Neg: return -du;
                case Expr::UnaryOp::Exp: return du * Expr::exp(u);
                case Expr::UnaryOp::Log: return du / u;
                case Expr::UnaryOp::Sqrt:
                    return du / (Expr::constant(2.0) * Expr::sqrt(u));
            }
            return Expr();
        }
        case Expr::Kind::Binary: {
            if (n.bop == Expr::BinaryOp::Pow) {
                // d/dx u^c = c * u^(c-1) * u'
                Expr u = e.lhs();
                Expr du = differentiate(u, index);
                return Expr::constant(n.value) * Expr::pow(u, n.value - 1.0) * du;
            }
            Expr a = e.lhs(), b = e.rhs();
            Expr da = differentiate(a, index);
            Expr db = differentiate(b, index);
            switch (n.bop) {
                case Expr::BinaryOp::Add: return da + db;
                case Expr::BinaryOp::Sub: return da - db;
                case Expr::BinaryOp::Mul: return da * b + a * db;
                case Expr::BinaryOp::Div: return (da * b - a * db) / (b * b);
                default: return Expr();
            }
        }
    }
    return Expr();
}

Expr substitute(const Expr& e, int index, const Expr& replacement) {
    const auto& n = e.node();
    switch (n.kind) {
        case Expr::Kind::Constant: return e;
        case Expr::Kind::Variable: return n.var == index ? replacement : e;
        case Expr::Kind::Unary: {
            Expr inner = substitute(e.lhs(), index, replacement);
            switch (n.uop) {
                case Expr::UnaryOp::Neg: return -inner;
                case Expr::UnaryOp::Exp: return Expr::exp(inner);
                case Expr::UnaryOp::Log: return Expr::log(inner);
                case Expr::UnaryOp::Sqrt: return Expr::sqrt(inner);
            }
            return Expr();
        }
        case Expr::Kind::Binary: {
            if (n.bop == Expr::BinaryOp::Pow)
                return Expr::pow(substitute(e.lhs(), index, replacement), n.value);
            Expr a = substitute(e.lhs(), index, replacement);
            Expr b = substitute(e.rhs(), index, replacement);
            switch (n.bop) {
                case Expr::BinaryOp::Add: return a + b;
                case Expr::BinaryOp::Sub: return a - b;
                case Expr::BinaryOp::Mul: return a * b;
                case Expr::BinaryOp::Div: return a / b;
                default: return Expr();
            }
        }
    }
    return Expr();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos);
    }

    double number() {
        skip_ws();
        std::size_t start = pos;
        const char* begin = text.c_str() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("expected a number", start);
        pos += static_cast<std::size_t>(end - begin);
        return v;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return text.substr(start, pos - start);
    }
};

struct Parser {
    Lexer lex;
    const std::vector<std::string>& vars;

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (lex.accept('+'))
                e = e + parse_term();
            else if (lex.accept('-'))
                e = e - parse_term();
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (lex.accept('*'))
                e = e * parse_factor();
            else if (lex.accept('/'))
                e = e / parse_factor();
            else
                return e;
        }
    }

    Expr parse_factor() {
        // unary minus distributes over the exponent: -x^2 == -(x^2)
        if (lex.accept('-')) return -parse_factor();
        Expr e = parse_base();
        if (lex.accept('^')) {
            bool negexp = lex.accept('-');
            double expo = lex.number();
            e = Expr::pow(e, negexp ? -expo : expo);
        }
        return e;
    }

    Expr parse_base() {
        char c = lex.peek();
        if (c == '\0') throw ParseError("unexpected end of input", lex.pos);
        if (c == '(') {
            lex.expect('(');
            Expr e = parse_expr();
            lex.expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(lex.number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = lex.pos;
            std::string name = lex.ident();
            if (lex.peek() == '(') {
                lex.expect('(');
                Expr arg = parse_expr();
                lex.expect(')');
                if (name == "exp") return Expr::exp(arg);
                if (name == "log") return Expr::log(arg);
                if (name == "sqrt") return Expr::sqrt(arg);
                throw ParseError("unsupported function '" + name + "'", at);
            }
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (vars[i] == name) return Expr::variable(static_cast<int>(i));
            throw ParseError("unknown identifier '" + name + "'", at);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", lex.pos);
    }
};

}  // namespace

Expr parse(const std::string& text, const std::vector<std::string>& var_names) {
    Parser p{Lexer{text}, var_names};
    Expr e = p.parse_expr();
    if (!p.lex.eof())
        throw ParseError("trailing input", p.lex.pos);
    return e;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void print(const Expr& e, std::span<const std::string> names, std::ostringstream& os) {
    const auto& n = e.node();
    switch (n.kind) {
        case Expr::Kind::Constant:
            if (n.value < 0.0) {
                os << "(" << fmt_double(n.value) << ")";
            } else {
                os << fmt_double(n.value);
            }
            return;
        case Expr::Kind::Variable:
            if (static_cast<std::size_t>(n.var) < names.size())
                os << names[static_cast<std::size_t>(n.var)];
            else
                os << "x" << n.var;
            return;
        case Expr::Kind::Unary:
            switch (n.uop) {
                case Expr::UnaryOp::Neg: os << "(-"; break;
                case Expr::UnaryOp::Exp: os << "exp("; break;
                case Expr::UnaryOp::Log: os << "log("; break;
                case Expr::UnaryOp::Sqrt: os << "sqrt("; break;
            }
            print(e.lhs(), names, os);
            os << ")";
            return;
        case Expr::Kind::Binary: {
            if (n.bop == Expr::BinaryOp::Pow) {
                os << "(";
                print(e.lhs(), names, os);
                os << ")^";
                if (n.value < 0.0) {
                    os << "(" << fmt_double(n.value) << ")";
                } else {
                    os << fmt_double(n.value);
                }
                return;
            }
            const char* op = n.bop == Expr::BinaryOp::Add   ? " + "
                             : n.bop == Expr::BinaryOp::Sub ? " - "
                             : n.bop == Expr::BinaryOp::Mul ? "*"
                                                            : "/";
            os << "(";
            print(e.lhs(), names, os);
            os << op;
            print(e.rhs(), names, os);
            os << ")";
            return;
        }
    }
}

}  // namespace

std::string Expr::to_string(std::span<const std::string> var_names) const {
    std::ostringstream os;
    print(*this, var_names, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Separable extraction
// ---------------------------------------------------------------------------

namespace {

// A product of factors with an accumulated sign; the working unit of
// the expansion loop below.
struct FactorTerm {
    double sign = 1.0;
    std::vector<Expr> factors;
};

void flatten_product(const Expr& e, FactorTerm& out) {
    const auto& n = e.node();
    if (n.kind == Expr::Kind::Unary && n.uop == Expr::UnaryOp::Neg) {
        out.sign = -out.sign;
        flatten_product(e.lhs(), out);
        return;
    }
    if (n.kind == Expr::Kind::Binary && n.bop == Expr::BinaryOp::Mul) {
        flatten_product(e.lhs(), out);
        flatten_product(e.rhs(), out);
        return;
    }
    if (n.kind == Expr::Kind::Binary && n.bop == Expr::BinaryOp::Div) {
        flatten_product(e.lhs(), out);
        out.factors.push_back(Expr::constant(1.0) / e.rhs());
        return;
    }
    out.factors.push_back(e);
}

void flatten_sum(const Expr& e, double sign, std::vector<FactorTerm>& out) {
    const auto& n = e.node();
    if (n.kind == Expr::Kind::Binary && n.bop == Expr::BinaryOp::Add) {
        flatten_sum(e.lhs(), sign, out);
        flatten_sum(e.rhs(), sign, out);
        return;
    }
    if (n.kind == Expr::Kind::Binary && n.bop == Expr::BinaryOp::Sub) {
        flatten_sum(e.lhs(), sign, out);
        flatten_sum(e.rhs(), -sign, out);
        return;
    }
    if (n.kind == Expr::Kind::Unary && n.uop == Expr::UnaryOp::Neg) {
        flatten_sum(e.lhs(), -sign, out);
        return;
    }
    FactorTerm t;
    t.sign = sign;
    flatten_product(e, t);
    out.push_back(std::move(t));
}

bool is_sum(const Expr& e) {
    const auto& n = e.node();
    return n.kind == Expr::Kind::Binary &&
           (n.bop == Expr::BinaryOp::Add || n.bop == Expr::BinaryOp::Sub);
}

}  // namespace

SeparableObjective extract_separable(const Expr& e, int n) {
    if (e.variable_count() > n)
        throw Error("expression references variable index beyond the declared count");

    // Worklist of product terms; multi-variable factors are broken up by
    // distributing sums and unrolling integer powers of sums. Factors that
    // reference a single variable are never expanded.
    std::vector<FactorTerm> pending;
    flatten_sum(e, 1.0, pending);

    std::vector<FactorTerm> done;
    while (!pending.empty()) {
        FactorTerm t = std::move(pending.back());
        pending.pop_back();

        int split_at = -1;
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            if (t.factors[i].variables().size() >= 2) {
                split_at = static_cast<int>(i);
                break;
            }
        }
        if (split_at < 0) {
            done.push_back(std::move(t));
            continue;
        }

        Expr f = t.factors[static_cast<std::size_t>(split_at)];
        t.factors.erase(t.factors.begin() + split_at);
        const auto& fn = f.node();

        if (is_sum(f) || (fn.kind == Expr::Kind::Unary && fn.uop == Expr::UnaryOp::Neg)) {
            std::vector<FactorTerm> parts;
            flatten_sum(f, 1.0, parts);
            for (auto& part : parts) {
                FactorTerm merged = t;
                merged.sign *= part.sign;
                merged.factors.insert(merged.factors.end(), part.factors.begin(),
                                      part.factors.end());
                pending.push_back(std::move(merged));
            }
            continue;
        }
        if (fn.kind == Expr::Kind::Binary && fn.bop == Expr::BinaryOp::Pow &&
            std::floor(fn.value) == fn.value && fn.value >= 2.0) {
            // (u)^k -> u * u^(k-1); the base sum is distributed next round
            t.factors.push_back(f.lhs());
            t.factors.push_back(Expr::pow(f.lhs(), fn.value - 1.0));
            pending.push_back(std::move(t));
            continue;
        }
        if (fn.kind == Expr::Kind::Binary &&
            (fn.bop == Expr::BinaryOp::Mul || fn.bop == Expr::BinaryOp::Div)) {
            FactorTerm sub;
            flatten_product(f, sub);
            t.sign *= sub.sign;
            t.factors.insert(t.factors.end(), sub.factors.begin(), sub.factors.end());
            pending.push_back(std::move(t));
            continue;
        }
        throw NotSeparableError("term contains an irreducible factor coupling " +
                                std::to_string(f.variables().size()) + " variables: " +
                                f.to_string());
    }

    SeparableObjective obj;
    obj.n = n;
    std::vector<Expr> univariate(static_cast<std::size_t>(n));

    for (auto& t : done) {
        // Group the factors of this term by variable; constants fold into
        // the sign/coefficient.
        double coeff = t.sign;
        std::vector<std::pair<int, Expr>> grouped;  // var -> product of its factors
        for (auto& f : t.factors) {
            auto vars = f.variables();
            if (vars.empty()) {
                coeff *= f.is_constant() ? f.constant_value() : eval(f, {});
                continue;
            }
            int v = *vars.begin();
            bool found = false;
            for (auto& [gv, ge] : grouped) {
                if (gv == v) {
                    ge = ge * f;
                    found = true;
                    break;
                }
            }
            if (!found) grouped.emplace_back(v, f);
        }

        if (grouped.empty()) {
            obj.constant += coeff;
            continue;
        }
        if (grouped.size() == 1) {
            auto& [v, g] = grouped.front();
            Expr scaled = Expr::constant(coeff) * g;
            auto& slot = univariate[static_cast<std::size_t>(v)];
            slot = slot.valid() ? slot + scaled : scaled;
            continue;
        }
        if (grouped.size() == 2) {
            if (grouped[0].first > grouped[1].first) std::swap(grouped[0], grouped[1]);
            SeparableObjective::Bivariate b;
            b.var_a = grouped[0].first;
            b.var_b = grouped[1].first;
            b.p = Expr::constant(coeff) * grouped[0].second;
            b.q = grouped[1].second;
            obj.bivariate.push_back(std::move(b));
            continue;
        }
        throw NotSeparableError("term couples " + std::to_string(grouped.size()) +
                                " variables");
    }

    for (int v = 0; v < n; ++v) {
        auto& g = univariate[static_cast<std::size_t>(v)];
        if (g.valid() && !(g.is_constant() && g.constant_value() == 0.0))
            obj.univariate.push_back({v, g});
    }
    return obj;
}

Expr SeparableObjective::reassemble() const {
    Expr sum = Expr::constant(constant);
    for (const auto& u : univariate) sum = sum + u.g;
    for (const auto& b : bivariate) sum = sum + b.p * b.q;
    return sum;
}

double SeparableObjective::operator()(std::span<const double> x) const {
    double total = constant;
    for (const auto& u : univariate) total += eval(u.g, x);
    for (const auto& b : bivariate) total += eval(b.p, x) * eval(b.q, x);
    return total;
}

}  // namespace qhdkit
