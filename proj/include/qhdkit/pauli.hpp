#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qhdkit/discretize.hpp"
#include "qhdkit/schedule.hpp"

namespace qhdkit {

enum class Scheme { Unary, OneHot, Hamming };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Qubits per continuous variable for an N-point grid.
int scheme_register_size(Scheme s, int N);

enum class SiteOp : std::uint8_t { X, Y, Num };

/// Real-weighted product of single-site operators; sites are strictly
/// increasing after canonicalization and the coefficient is nonzero.
struct PauliTerm {
    struct Factor {
        int site;
        SiteOp op;
    };
    double coeff = 0.0;
    std::vector<Factor> factors;
};

/// A per-register embedding block: term list plus an identity offset.
struct EmbeddedBlock {
    std::vector<PauliTerm> terms;
    double offset = 0.0;
};

/// Qubit-level surrogate of the discretized generator. The kinetic group
/// is scheduled by e^phi * (-1/2) and the potential group (plus scalar
/// offset) by e^chi. Variable i occupies sites i*r .. (i+1)*r-1; sites use
/// left-to-right 0-indexing, so site k is bit (num_qubits-1-k) of a basis
/// index.
struct HamiltonianIR {
    Scheme scheme = Scheme::Unary;
    int n_vars = 0;
    int r = 0;  // sites per variable
    int num_qubits = 0;
    int grid_points = 0;  // N of the underlying grid
    double grid_h = 0.0;
    std::vector<PauliTerm> kinetic;
    std::vector<PauliTerm> potential;
    double offset = 0.0;
};

/// Valid per-register bitstrings and the grid index each encodes.
class CodewordMap {
public:
    CodewordMap(Scheme scheme, int r);

    Scheme scheme() const { return scheme_; }
    int register_size() const { return r_; }
    /// Number of representable grid values per register.
    int num_values() const;
    /// Grid value encoded by index j (j*h with the scheme's own h).
    double value(int j) const;

    /// Canonical register bitstring for grid index j ('0'/'1', site 0 first).
    std::string encode(int j) const;
    /// Grid index for a register string, or nullopt when not a codeword
    /// (one-hot: weight != 1; unary: not of the 0..01..1 form).
    std::optional<int> decode_register(const std::string& reg) const;

private:
    Scheme scheme_;
    int r_;
};

enum class DecodePolicy { Strict, Lenient };

/// Decoded sample or rejection; rejection is a value, not a fault.
struct Decoded {
    bool accepted = false;
    std::vector<double> coords;
};

/// Per-register kinetic block of Table-row form (local sites 0..r-1).
EmbeddedBlock embed_block_kinetic(Scheme scheme, int N);

/// Per-register potential block for the grid samples g_values (size N).
/// Hamming requires the samples to lie on an (affine-)quadratic function
/// of the grid coordinate and throws HammingUnsupported otherwise.
EmbeddedBlock embed_block_potential(Scheme scheme, const std::vector<double>& g_values);

/// Compile the discretized generator into the qubit IR: per-variable
/// blocks shifted onto their registers, bivariate entries expanded into
/// cross-register products.
HamiltonianIR assemble_embedding(const DiscretizedHamiltonian& dh, Scheme scheme);

/// Restriction of the two groups onto the tensor-product codeword basis,
/// ordered by grid multi-index (unary/one-hot only).
struct RestrictedGroups {
    Eigen::MatrixXd kinetic;    // raw Table-1 coefficients, no schedule factor
    Eigen::MatrixXd potential;  // includes the scalar offset on the diagonal
};
RestrictedGroups restrict_groups(const HamiltonianIR& ir, const CodewordMap& map,
                                 std::size_t site_cap = 24);

/// Full restriction at schedule time t:
///   e^phi * (-1/2) * kinetic + e^chi * potential.
Eigen::MatrixXd restrict_to_codewords(const HamiltonianIR& ir, const CodewordMap& map,
                                      double t, const Schedule& schedule,
                                      std::size_t site_cap = 24);

/// Decode a measured bitstring of length n*r into unit-box coordinates.
/// unary strict: only 0..01..1 accepted; unary lenient: popcount/r;
/// one-hot: single hot bit required under both policies; Hamming:
/// popcount/r always.
Decoded decode(const std::string& bits, const CodewordMap& map, DecodePolicy policy);

/// Two-local annealer document for unary/Hamming IRs (JSON text):
/// num_qubits, linear/quadratic number-operator coefficients, X driver,
/// offset, schedule breakpoints, anneal_time_us. One-hot IRs throw
/// OneHotNotAnnealable.
std::string export_annealer(const HamiltonianIR& ir, const Schedule& schedule,
                            double anneal_time_us = 20.0);

/// IR JSON dump (qubits, scheme, kinetic/potential term lists, offset).
std::string ir_to_json(const HamiltonianIR& ir);

}  // namespace qhdkit
