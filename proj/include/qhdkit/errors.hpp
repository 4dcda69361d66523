#pragma once

#include <stdexcept>
#include <string>

namespace qhdkit {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error with a byte position into the source text.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Evaluation outside the mathematical domain (log of nonpositive,
/// fractional power of a negative base, division by zero).
struct DomainError : Error {
    using Error::Error;
};

/// Objective cannot be decomposed into the supported univariate +
/// bivariate-product form.
struct NotSeparableError : Error {
    using Error::Error;
};

/// Embedding scheme cannot represent the requested block.
struct EmbeddingError : Error {
    using Error::Error;
};

/// Hamming potential blocks exist only for (affine-)quadratic functions.
struct HammingUnsupported : EmbeddingError {
    using EmbeddingError::EmbeddingError;
};

/// One-hot IR contains Y factors and X products; no annealer form exists.
struct OneHotNotAnnealable : EmbeddingError {
    using EmbeddingError::EmbeddingError;
};

/// State dimension exceeds the configured cap.
struct DimensionCapExceeded : Error {
    using Error::Error;
};

/// Numerical-integration quality gate tripped (norm drift past tolerance).
struct EvolveError : Error {
    using Error::Error;
};

/// Invalid benchmark configuration or inputs.
struct BenchError : Error {
    using Error::Error;
};

}  // namespace qhdkit
