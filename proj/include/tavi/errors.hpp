#pragma once

#include <stdexcept>
#include <string>

namespace tavi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input matrix is not skew-symmetric within tolerance.
class NotSkewError : public Error {
public:
    using Error::Error;
};

/// Matrix fails the rotation invariants (orthogonality, unit determinant).
class NotRotationError : public Error {
public:
    using Error::Error;
};

/// Requested group update has ||a|| >= 1; the fictive step h must be reduced.
class StepTooLargeError : public Error {
public:
    using Error::Error;
};

/// Iterative scheme exhausted its iteration budget.
class NoConvergenceError : public Error {
public:
    using Error::Error;
};

/// Physical time must be strictly positive.
class NonpositiveTimeError : public Error {
public:
    using Error::Error;
};

/// A computed quantity is NaN or infinite (divergence).
class NonFiniteError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

/// Run configuration failed validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Runs passed to a comparison do not share a problem instance.
class MismatchedProblemError : public Error {
public:
    using Error::Error;
};

} // namespace tavi
