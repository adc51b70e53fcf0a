#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dashsvd {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number where parsing failed.
struct ParseError : Error {
    ParseError(std::int64_t line_, const std::string& what_)
        : Error("parse error at line " + std::to_string(line_) + ": " + what_), line(line_) {}
    std::int64_t line = 0;
};

// Structurally valid file whose declared format we do not handle (e.g. complex field).
struct UnsupportedFormat : Error {
    using Error::Error;
};

// Dimension mismatch or an argument whose shape violates a precondition.
struct ShapeError : Error {
    using Error::Error;
};

// Invalid solver or command configuration (conflicting or out-of-range settings).
struct ConfigError : Error {
    using Error::Error;
};

// Factorization input is numerically rank deficient; carries the 0-based index of the
// first singular value (or diagonal entry) that fell below the rank floor.
struct RankDeficient : Error {
    RankDeficient(std::int64_t index_, const std::string& what_)
        : Error(what_ + " (index " + std::to_string(index_) + ")"), index(index_) {}
    std::int64_t index = 0;
};

// Iterative kernel failed to converge within its iteration cap, or produced
// non-finite intermediates.
struct NumericalError : Error {
    using Error::Error;
};

// Reference spectrum unusable for the requested metric (e.g. sigma_{k+1} = 0).
struct DegenerateReference : Error {
    using Error::Error;
};

// Probabilistic bound evaluated outside its hypotheses (j >= k, beta/gamma <= 1,
// l > n - k, or failure probability above 1).
struct HypothesisError : Error {
    using Error::Error;
};

}  // namespace dashsvd
