#pragma once

#include <stdexcept>
#include <string>

namespace padic {

/// Root of every error the library throws. Each subclass names one failure
/// mode so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonInvertible : public Error {
public:
    using Error::Error;
};

class NotASquare : public Error {
public:
    using Error::Error;
};

class NotPrimitive : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

/// Raised when a self-check fails; indicates a bug, never bad input.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

class ContractViolation : public Error {
public:
    using Error::Error;
};

class PrecisionLoss : public Error {
public:
    using Error::Error;
};

class RegimeViolation : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace padic
