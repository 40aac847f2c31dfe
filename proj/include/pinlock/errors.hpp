#pragma once

#include <stdexcept>
#include <string>

namespace pinlock {

/// Input outside an operation's domain (negative deflection, p > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// 1 - mu * tan(beta) <= 0: the asperity engagement self-locks and the
/// apparent friction coefficient is undefined.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Calibration targets cannot be met by any gamma pressing-force law.
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No leg left in stance. Distinct from a slip, which is a negative margin.
class StructuralFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pinlock
