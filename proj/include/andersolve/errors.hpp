#pragma once

#include <stdexcept>
#include <string>

namespace andersolve {

/// Base class for every recoverable failure raised by this library.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by lu_solve when a pivot falls below the relative threshold.
class SingularMatrixError : public SolverError {
public:
    using SolverError::SolverError;
};

class EmptyWindowError : public SolverError {
public:
    using SolverError::SolverError;
};

/// The combined-step residual is exactly zero; the iteration has converged.
class ZeroResidualError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Consecutive steps coincide, so the depth-1 gamma is undefined.
class DegenerateDifferenceError : public SolverError {
public:
    using SolverError::SolverError;
};

class NotOrthogonalError : public SolverError {
public:
    using SolverError::SolverError;
};

class InvalidInputError : public SolverError {
public:
    using SolverError::SolverError;
};

class ConfigError : public SolverError {
public:
    using SolverError::SolverError;
};

class InsufficientHistoryError : public SolverError {
public:
    using SolverError::SolverError;
};

/// LM damping collapsed while the normal matrix is singular.
class DegenerateDampingError : public SolverError {
public:
    using SolverError::SolverError;
};

} // namespace andersolve
