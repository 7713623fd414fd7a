#pragma once

#include <stdexcept>
#include <string>

namespace effcas {

/// Raised when a product or constraint would exceed the engine word length,
/// or when an expectation needs moments above the state's truncation order.
class OrderOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AlgebraMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that are well formed but physically inconsistent (negative inferred
/// variance, tail mass too large, no normalizable solution).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace effcas
