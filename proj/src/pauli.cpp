#include "qhdkit/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include <json.hpp>

namespace qhdkit {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Unary: return "unary";
        case Scheme::OneHot: return "onehot";
        case Scheme::Hamming: return "hamming";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "unary") return Scheme::Unary;
    if (name == "onehot" || name == "one-hot") return Scheme::OneHot;
    if (name == "hamming") return Scheme::Hamming;
    throw Error("unknown embedding scheme '" + name + "'");
}

int scheme_register_size(Scheme s, int N) {
    return s == Scheme::OneHot ? N : N - 1;
}

// ---------------------------------------------------------------------------
// Codewords
// ---------------------------------------------------------------------------

CodewordMap::CodewordMap(Scheme scheme, int r) : scheme_(scheme), r_(r) {
    if (r < 2) throw Error("register size must be at least 2");
}

int CodewordMap::num_values() const {
    return scheme_ == Scheme::OneHot ? r_ : r_ + 1;
}

double CodewordMap::value(int j) const {
    if (scheme_ == Scheme::OneHot)
        return static_cast<double>(j) / static_cast<double>(r_ - 1);
    return static_cast<double>(j) / static_cast<double>(r_);
}

std::string CodewordMap::encode(int j) const {
    if (j < 0 || j >= num_values()) throw Error("grid index out of range");
    std::string reg(static_cast<std::size_t>(r_), '0');
    if (scheme_ == Scheme::OneHot) {
        reg[static_cast<std::size_t>(r_ - 1 - j)] = '1';
    } else {
        // 0^(r-j) 1^j, including the Hamming representative
        for (int k = r_ - j; k < r_; ++k) reg[static_cast<std::size_t>(k)] = '1';
    }
    return reg;
}

std::optional<int> CodewordMap::decode_register(const std::string& reg) const {
    if (static_cast<int>(reg.size()) != r_) throw Error("register length mismatch");
    int ones = 0;
    for (char c : reg) ones += (c == '1');
    switch (scheme_) {
        case Scheme::Hamming:
            return ones;
        case Scheme::OneHot: {
            if (ones != 1) return std::nullopt;
            const int k = static_cast<int>(reg.find('1'));
            return r_ - 1 - k;
        }
        case Scheme::Unary: {
            // zeros then ones
            const auto first_one = reg.find('1');
            if (first_one == std::string::npos) return 0;
            if (reg.find('0', first_one) != std::string::npos) return std::nullopt;
            return ones;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Blocks (Table rows)
// ---------------------------------------------------------------------------

namespace {

PauliTerm single(double c, int site, SiteOp op) {
    PauliTerm t;
    t.coeff = c;
    t.factors = {{site, op}};
    return t;
}

PauliTerm pair(double c, int a, SiteOp opa, int b, SiteOp opb) {
    PauliTerm t;
    t.coeff = c;
    t.factors = {{a, opa}, {b, opb}};
    return t;
}

}  // namespace

EmbeddedBlock embed_block_kinetic(Scheme scheme, int N) {
    if (N < 3) throw Error("grid needs at least 3 points");
    const int r = scheme_register_size(scheme, N);
    const double h = 1.0 / static_cast<double>(N - 1);
    const double w = 1.0 / (h * h);
    EmbeddedBlock block;
    if (scheme == Scheme::OneHot) {
        for (int k = 0; k + 1 < r; ++k) {
            block.terms.push_back(pair(0.5 * w, k, SiteOp::X, k + 1, SiteOp::X));
            block.terms.push_back(pair(0.5 * w, k, SiteOp::Y, k + 1, SiteOp::Y));
        }
    } else {
        for (int k = 0; k < r; ++k) block.terms.push_back(single(w, k, SiteOp::X));
    }
    return block;
}

namespace {

EmbeddedBlock hamming_potential(const std::vector<double>& g, int r) {
    // only representable when g is quadratic in the grid coordinate:
    // g(v) = alpha v^2 + beta v + gamma with v = j/r
    const double gamma = g.front();
    const int jm = r / 2;
    const double vm = static_cast<double>(jm) / static_cast<double>(r);
    const double g1 = g.back() - gamma;   // alpha + beta
    const double gm = g[static_cast<std::size_t>(jm)] - gamma;
    const double alpha = (gm - vm * g1) / (vm * vm - vm);
    const double beta = g1 - alpha;

    double scale = 1.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    for (int j = 0; j <= r; ++j) {
        const double v = static_cast<double>(j) / static_cast<double>(r);
        const double fit = alpha * v * v + beta * v + gamma;
        if (std::abs(fit - g[static_cast<std::size_t>(j)]) > 1e-9 * scale)
            throw HammingUnsupported(
                "Hamming potential blocks require a quadratic function of the coordinate");
    }

    // alpha*E2 + beta*E1 with E1 = (1/r) sum n_k, E2 = E1^2, using n_k^2 = n_k
    const double rr = static_cast<double>(r);
    EmbeddedBlock block;
    block.offset = gamma;
    const double lin = beta / rr + alpha / (rr * rr);
    if (lin != 0.0)
        for (int k = 0; k < r; ++k) block.terms.push_back(single(lin, k, SiteOp::Num));
    const double quad = 2.0 * alpha / (rr * rr);
    if (quad != 0.0)
        for (int k = 0; k < r; ++k)
            for (int l = k + 1; l < r; ++l)
                block.terms.push_back(pair(quad, k, SiteOp::Num, l, SiteOp::Num));
    return block;
}

}  // namespace

EmbeddedBlock embed_block_potential(Scheme scheme, const std::vector<double>& g_values) {
    const int N = static_cast<int>(g_values.size());
    if (N < 3) throw Error("grid needs at least 3 points");
    const int r = scheme_register_size(scheme, N);
    EmbeddedBlock block;
    switch (scheme) {
        case Scheme::Unary:
            block.offset = g_values.front();
            for (int k = 0; k < r; ++k) {
                const double c = g_values[static_cast<std::size_t>(r - k)] -
                                 g_values[static_cast<std::size_t>(r - k - 1)];
                if (c != 0.0) block.terms.push_back(single(c, k, SiteOp::Num));
            }
            return block;
        case Scheme::OneHot:
            for (int k = 0; k < r; ++k) {
                const double c = g_values[static_cast<std::size_t>(r - 1 - k)];
                if (c != 0.0) block.terms.push_back(single(c, k, SiteOp::Num));
            }
            return block;
        case Scheme::Hamming:
            return hamming_potential(g_values, r);
    }
    return block;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

namespace {

PauliTerm shifted(const PauliTerm& t, int base) {
    PauliTerm out = t;
    for (auto& f : out.factors) f.site += base;
    return out;
}

PauliTerm product(const PauliTerm& a, const PauliTerm& b) {
    // cross-register products only; sites never collide
    PauliTerm out;
    out.coeff = a.coeff * b.coeff;
    out.factors = a.factors;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    std::sort(out.factors.begin(), out.factors.end(),
              [](const PauliTerm::Factor& x, const PauliTerm::Factor& y) {
                  return x.site < y.site;
              });
    return out;
}

// merge duplicate operator signatures and drop vanished terms
std::vector<PauliTerm> canonicalize(const std::vector<PauliTerm>& terms) {
    std::map<std::vector<std::pair<int, int>>, double> acc;
    for (const auto& t : terms) {
        std::vector<std::pair<int, int>> key;
        key.reserve(t.factors.size());
        for (const auto& f : t.factors)
            key.emplace_back(f.site, static_cast<int>(f.op));
        acc[key] += t.coeff;
    }
    std::vector<PauliTerm> out;
    for (const auto& [key, c] : acc) {
        if (c == 0.0) continue;
        PauliTerm t;
        t.coeff = c;
        for (const auto& [site, op] : key)
            t.factors.push_back({site, static_cast<SiteOp>(op)});
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

HamiltonianIR assemble_embedding(const DiscretizedHamiltonian& dh, Scheme scheme) {
    const int N = dh.grid.N;
    const int r = scheme_register_size(scheme, N);

    HamiltonianIR ir;
    ir.scheme = scheme;
    ir.n_vars = dh.n;
    ir.r = r;
    ir.num_qubits = dh.n * r;
    ir.grid_points = N;
    ir.grid_h = dh.grid.h;
    ir.offset = dh.offset;

    const EmbeddedBlock kin = embed_block_kinetic(scheme, N);
    for (int i = 0; i < dh.n; ++i)
        for (const auto& t : kin.terms) ir.kinetic.push_back(shifted(t, i * r));

    for (const auto& u : dh.univariate) {
        EmbeddedBlock block = embed_block_potential(scheme, u.values);
        for (const auto& t : block.terms) ir.potential.push_back(shifted(t, u.slot * r));
        ir.offset += block.offset;
    }
    for (const auto& bv : dh.bivariate) {
        EmbeddedBlock ba = embed_block_potential(scheme, bv.a);
        EmbeddedBlock bb = embed_block_potential(scheme, bv.b);
        const int base_a = bv.slot_a * r;
        const int base_b = bv.slot_b * r;
        for (const auto& ta : ba.terms)
            for (const auto& tb : bb.terms)
                ir.potential.push_back(product(shifted(ta, base_a), shifted(tb, base_b)));
        if (bb.offset != 0.0)
            for (const auto& ta : ba.terms) {
                PauliTerm t = shifted(ta, base_a);
                t.coeff *= bb.offset;
                ir.potential.push_back(std::move(t));
            }
        if (ba.offset != 0.0)
            for (const auto& tb : bb.terms) {
                PauliTerm t = shifted(tb, base_b);
                t.coeff *= ba.offset;
                ir.potential.push_back(std::move(t));
            }
        ir.offset += ba.offset * bb.offset;
    }

    ir.kinetic = canonicalize(ir.kinetic);
    ir.potential = canonicalize(ir.potential);
    return ir;
}

// ---------------------------------------------------------------------------
// Restriction to the codeword subspace
// ---------------------------------------------------------------------------

namespace {

using cplx = std::complex<double>;

// Apply a term to a basis string; returns the image string and amplitude
// (zero amplitude when a number operator hits an empty site).
cplx apply_term(const PauliTerm& t, std::string& bits) {
    cplx amp = t.coeff;
    for (const auto& f : t.factors) {
        char& c = bits[static_cast<std::size_t>(f.site)];
        switch (f.op) {
            case SiteOp::X:
                c = (c == '0') ? '1' : '0';
                break;
            case SiteOp::Y:
                amp *= (c == '0') ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
                c = (c == '0') ? '1' : '0';
                break;
            case SiteOp::Num:
                if (c == '0') return 0.0;
                break;
        }
    }
    return amp;
}

Eigen::MatrixXd restrict_terms(const std::vector<PauliTerm>& terms, const CodewordMap& map,
                               int n_vars) {
    const int r = map.register_size();
    const int vals = map.num_values();
    std::size_t dim = 1;
    for (int i = 0; i < n_vars; ++i) dim *= static_cast<std::size_t>(vals);

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    std::vector<int> multi(static_cast<std::size_t>(n_vars), 0);
    for (std::size_t col = 0; col < dim; ++col) {
        // multi-index of this column, first variable most significant
        std::size_t rest = col;
        for (int v = n_vars - 1; v >= 0; --v) {
            multi[static_cast<std::size_t>(v)] = static_cast<int>(rest % static_cast<std::size_t>(vals));
            rest /= static_cast<std::size_t>(vals);
        }
        std::string bits;
        bits.reserve(static_cast<std::size_t>(n_vars * r));
        for (int v = 0; v < n_vars; ++v) bits += map.encode(multi[static_cast<std::size_t>(v)]);

        for (const auto& t : terms) {
            std::string image = bits;
            const cplx amp = apply_term(t, image);
            if (amp == 0.0) continue;
            // project the image back onto the codeword basis
            std::size_t row = 0;
            bool valid = true;
            for (int v = 0; v < n_vars; ++v) {
                const auto j = map.decode_register(
                    image.substr(static_cast<std::size_t>(v * r), static_cast<std::size_t>(r)));
                if (!j) {
                    valid = false;
                    break;
                }
                row = row * static_cast<std::size_t>(vals) + static_cast<std::size_t>(*j);
            }
            if (!valid) continue;
            if (std::abs(amp.imag()) > 1e-12 * (1.0 + std::abs(amp.real())))
                throw Error("restriction produced a non-real matrix element");
            M(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += amp.real();
        }
    }
    return M;
}

}  // namespace

RestrictedGroups restrict_groups(const HamiltonianIR& ir, const CodewordMap& map,
                                 std::size_t site_cap) {
    if (ir.scheme == Scheme::Hamming)
        throw Error("codeword restriction is defined for unary and one-hot schemes");
    if (map.scheme() != ir.scheme || map.register_size() != ir.r)
        throw Error("codeword map does not match the IR");
    if (static_cast<std::size_t>(ir.num_qubits) > site_cap)
        throw DimensionCapExceeded("restriction cap exceeded: " +
                                   std::to_string(ir.num_qubits) + " sites");
    RestrictedGroups out;
    out.kinetic = restrict_terms(ir.kinetic, map, ir.n_vars);
    out.potential = restrict_terms(ir.potential, map, ir.n_vars);
    out.potential.diagonal().array() += ir.offset;
    return out;
}

Eigen::MatrixXd restrict_to_codewords(const HamiltonianIR& ir, const CodewordMap& map,
                                      double t, const Schedule& schedule,
                                      std::size_t site_cap) {
    const RestrictedGroups g = restrict_groups(ir, map, site_cap);
    return schedule.kinetic_coeff(t) * (-0.5) * g.kinetic +
           schedule.potential_coeff(t) * g.potential;
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

Decoded decode(const std::string& bits, const CodewordMap& map, DecodePolicy policy) {
    const int r = map.register_size();
    if (bits.empty() || static_cast<int>(bits.size()) % r != 0)
        throw Error("bitstring length " + std::to_string(bits.size()) +
                    " is not a multiple of the register size " + std::to_string(r));
    for (char c : bits)
        if (c != '0' && c != '1') throw Error("bitstring must be over {0,1}");
    const int n = static_cast<int>(bits.size()) / r;

    Decoded out;
    out.coords.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const std::string reg = bits.substr(static_cast<std::size_t>(v * r),
                                            static_cast<std::size_t>(r));
        switch (map.scheme()) {
            case Scheme::Hamming: {
                int ones = 0;
                for (char c : reg) ones += (c == '1');
                out.coords.push_back(static_cast<double>(ones) / static_cast<double>(r));
                break;
            }
            case Scheme::Unary: {
                if (policy == DecodePolicy::Lenient) {
                    int ones = 0;
                    for (char c : reg) ones += (c == '1');
                    out.coords.push_back(static_cast<double>(ones) / static_cast<double>(r));
                } else {
                    const auto j = map.decode_register(reg);
                    if (!j) return Decoded{};  // rejected
                    out.coords.push_back(map.value(*j));
                }
                break;
            }
            case Scheme::OneHot: {
                const auto j = map.decode_register(reg);
                if (!j) return Decoded{};  // rejected under both policies
                out.coords.push_back(map.value(*j));
                break;
            }
        }
    }
    out.accepted = true;
    return out;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

namespace {

const char* op_name(SiteOp op) {
    switch (op) {
        case SiteOp::X: return "X";
        case SiteOp::Y: return "Y";
        case SiteOp::Num: return "Num";
    }
    return "?";
}

}  // namespace

std::string export_annealer(const HamiltonianIR& ir, const Schedule& schedule,
                            double anneal_time_us) {
    if (ir.scheme == Scheme::OneHot)
        throw OneHotNotAnnealable("one-hot IRs contain XX/YY products with no annealer form");

    nlohmann::json linear = nlohmann::json::object();
    nlohmann::json quadratic = nlohmann::json::object();
    nlohmann::json driver = nlohmann::json::object();

    for (const auto& t : ir.kinetic) {
        if (t.factors.size() != 1 || t.factors[0].op != SiteOp::X)
            throw OneHotNotAnnealable("kinetic group is not a single-site X driver");
        driver[std::to_string(t.factors[0].site)] = t.coeff;
    }
    for (const auto& t : ir.potential) {
        for (const auto& f : t.factors)
            if (f.op != SiteOp::Num)
                throw OneHotNotAnnealable("potential group is not diagonal in number operators");
        if (t.factors.size() == 1) {
            linear[std::to_string(t.factors[0].site)] = t.coeff;
        } else if (t.factors.size() == 2) {
            quadratic[std::to_string(t.factors[0].site) + "," +
                      std::to_string(t.factors[1].site)] = t.coeff;
        } else {
            throw OneHotNotAnnealable("potential term is more than two-local");
        }
    }

    nlohmann::json sched = nlohmann::json::array();
    for (const auto& bp : schedule.breakpoints())
        sched.push_back({bp.t, bp.phi, bp.chi});

    nlohmann::json doc;
    doc["num_qubits"] = ir.num_qubits;
    doc["linear"] = std::move(linear);
    doc["quadratic"] = std::move(quadratic);
    doc["driver"] = std::move(driver);
    doc["offset"] = ir.offset;
    doc["schedule"] = std::move(sched);
    doc["anneal_time_us"] = anneal_time_us;
    return doc.dump(2);
}

namespace {

nlohmann::json terms_to_json(const std::vector<PauliTerm>& terms) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : terms) {
        nlohmann::json ops = nlohmann::json::array();
        for (const auto& f : t.factors) ops.push_back({f.site, op_name(f.op)});
        arr.push_back({{"coeff", t.coeff}, {"ops", std::move(ops)}});
    }
    return arr;
}

}  // namespace

std::string ir_to_json(const HamiltonianIR& ir) {
    nlohmann::json doc;
    doc["qubits"] = ir.num_qubits;
    doc["scheme"] = scheme_name(ir.scheme);
    doc["kinetic"] = terms_to_json(ir.kinetic);
    doc["potential"] = terms_to_json(ir.potential);
    doc["offset"] = ir.offset;
    return doc.dump(2);
}

}  // namespace qhdkit
