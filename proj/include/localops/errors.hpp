#ifndef LOCALOPS_ERRORS_HPP
#define LOCALOPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace localops {

// Thrown when a caller hands us structurally bad input: shape mismatches,
// malformed JSON, out-of-range subsystem indices. Maps to CLI exit code 2.
class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when an input is well formed but violates a documented precondition
// (e.g. a matrix that must be PSD is not, a certificate does not verify).
// Maps to CLI exit code 1.
class contract_error : public std::runtime_error {
public:
    explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an iterative routine fails to converge or two redundant
// numerical checks disagree by far more than their tolerances allow.
// Maps to CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace localops

#endif
