#pragma once

#include <stdexcept>
#include <string>

namespace tdp {

// Base of every library error. `is_constraint()` separates invalid input
// (bad parameters, violated bounds) from numerical failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual bool is_constraint() const { return false; }
};

class ConstraintError : public Error {
public:
    using Error::Error;
    bool is_constraint() const override { return true; }
};

// Non-positive frequency sample, invalid hierarchy parameters.
class DomainError : public ConstraintError {
public:
    using ConstraintError::ConstraintError;
};

// Square-root radicand of the Backlund step is not positive.
class BranchError : public ConstraintError {
public:
    using ConstraintError::ConstraintError;
};

// Linearised Riccati solution u has a real zero.
class SingularError : public ConstraintError {
public:
    using ConstraintError::ConstraintError;
};

// Evaluation point outside the working window.
class RangeError : public Error {
public:
    using Error::Error;
};

// Confluent hypergeometric pole, division by a vanishing function.
class PoleError : public Error {
public:
    using Error::Error;
};

// Internal invariant broken (e.g. inexact polynomial division).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Grid cannot resolve the function it is asked to differentiate.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Residual above the tolerance of a certified construction.
class AccuracyError : public Error {
public:
    using Error::Error;
};

// Wavefunction reaches the boundary of the spatial window.
class WindowError : public Error {
public:
    using Error::Error;
};

}  // namespace tdp
