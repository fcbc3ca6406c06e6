#pragma once

#include <stdexcept>
#include <string>

namespace npdyn {

/// Base class for all npdyn failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A field or map produced a non-finite value, or an output of the wrong size.
struct EvaluationError : Error {
    using Error::Error;
};

/// Dimensions of the inputs do not match the operation's requirements.
struct DimensionError : Error {
    using Error::Error;
};

/// Tensor order exceeds the space dimension (all components vanish identically).
struct DegenerateOrderError : Error {
    using Error::Error;
};

/// Integration produced a non-finite state.
struct BlowUpError : Error {
    BlowUpError(const std::string& what, double last_finite_time)
        : Error(what), last_time(last_finite_time) {}
    double last_time;
};

/// Implicit stage iteration failed to reach its residual target.
struct ConvergenceError : Error {
    using Error::Error;
};

/// Two vortices closer than the collision threshold.
struct CollisionError : Error {
    CollisionError(const std::string& what, int first_index, int second_index)
        : Error(what), first(first_index), second(second_index) {}
    int first;
    int second;
};

/// The structure two-form is numerically singular (constrained system).
struct SingularStructureError : Error {
    SingularStructureError(const std::string& what, double determinant)
        : Error(what), det(determinant) {}
    double det;
};

/// A discrete step map has a singular Jacobian at the requested state.
struct IrreversibleError : Error {
    IrreversibleError(const std::string& what, double determinant)
        : Error(what), det(determinant) {}
    double det;
};

/// Scalar argument outside the operation's domain.
struct DomainError : Error {
    using Error::Error;
};

/// Radial grid too coarse or otherwise malformed.
struct GridError : Error {
    using Error::Error;
};

/// Array lengths do not line up.
struct ShapeError : Error {
    using Error::Error;
};

/// Run configuration failed validation.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace npdyn
