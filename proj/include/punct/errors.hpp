#ifndef PUNCT_ERRORS_HPP
#define PUNCT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace punct {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (bad column count, bad integer field, ...).
struct ParseError : Error {
    ParseError(const std::string& msg, long line)
        : Error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
    long line_number;
};

// Construct the toolkit recognizes but does not model (empty-node IDs).
struct UnsupportedConstructError : Error {
    using Error::Error;
};

// A sentence that fails the tree well-formedness invariants.
struct ValidationError : Error {
    using Error::Error;
};

// Gold/system token sequences cannot be put in correspondence.
struct AlignmentError : Error {
    using Error::Error;
};

// A data-level refusal (all-punctuation sentence, punctuation root, ...).
struct DataError : Error {
    using Error::Error;
};

// Metric is undefined for the given inputs (baseline score of 1.0).
struct UndefinedMetricError : Error {
    using Error::Error;
};

// Static oracle cannot derive a transition sequence (non-projective input).
struct OracleInfeasibleError : Error {
    using Error::Error;
};

// A caller violated a documented precondition.
struct ContractViolation : Error {
    using Error::Error;
};

// Bad command-line usage or experiment config.
struct UsageError : Error {
    using Error::Error;
};

}  // namespace punct

#endif  // PUNCT_ERRORS_HPP
