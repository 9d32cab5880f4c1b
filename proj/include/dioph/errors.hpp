#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid arguments / contract violations (CLI exit code 2).
struct UsageError : Error {
    using Error::Error;
};

struct NotPrimeError : UsageError {
    using UsageError::UsageError;
};
struct EvenCharacteristicError : UsageError {
    using UsageError::UsageError;
};
struct ReducibleModulusError : UsageError {
    using UsageError::UsageError;
};
struct FieldTooLargeError : UsageError {
    using UsageError::UsageError;
};
struct DivisionByZeroError : UsageError {
    using UsageError::UsageError;
};
struct ZeroPolynomialError : UsageError {
    using UsageError::UsageError;
};
struct BothZeroGcdError : UsageError {
    using UsageError::UsageError;
};
struct ZeroEpsilonError : UsageError {
    using UsageError::UsageError;
};
struct PreconditionViolatedError : UsageError {
    using UsageError::UsageError;
};
struct UnsupportedVariantError : UsageError {
    using UsageError::UsageError;
};
struct RangeError : UsageError {
    using UsageError::UsageError;
};
struct EmptyInputError : UsageError {
    using UsageError::UsageError;
};

// Work would exceed the configured budget (CLI exit code 3).
struct BudgetExceededError : Error {
    using Error::Error;
};

// An exact identity that is a theorem failed to hold; this signals an
// implementation defect, never bad input (CLI exit code 4).
struct IdentityViolatedError : Error {
    using Error::Error;
};

}  // namespace dioph
