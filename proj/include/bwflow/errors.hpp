#pragma once

#include <stdexcept>
#include <string>

namespace bwflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input or configuration. The CLI maps these to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};

// A mathematical precondition does not hold. The CLI maps these to exit code 3.
class MathError : public Error {
public:
    using Error::Error;
};

class SymmetryViolation : public MathError {
public:
    using MathError::MathError;
};

class NotPSD : public MathError {
public:
    using MathError::MathError;
};

class DisconnectedGraph : public MathError {
public:
    using MathError::MathError;
};

class SingularCovariance : public MathError {
public:
    using MathError::MathError;
};

class TimeSingularity : public MathError {
public:
    using MathError::MathError;
};

class NonFiniteVelocity : public MathError {
public:
    using MathError::MathError;
};

}  // namespace bwflow
