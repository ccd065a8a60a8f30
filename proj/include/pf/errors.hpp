#pragma once

#include <stdexcept>
#include <string>

namespace pf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad argument or configuration (non-positive constant, n = 0, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// Evaluation requested outside a profile or potential domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// A speed at or beyond c where a subluminal one is required.
class SuperluminalError : public Error {
public:
    explicit SuperluminalError(const std::string& what) : Error(what) {}
};

/// Input lies outside the regime where a formula is meaningful
/// (inverted interval bracket, slope beyond the expansion bound, ...).
/// Carries the offending value for diagnostics.
class OutOfRegime : public Error {
public:
    OutOfRegime(const std::string& what, double diagnostic)
        : Error(what), diagnostic_(diagnostic) {}
    double diagnostic() const noexcept { return diagnostic_; }

private:
    double diagnostic_;
};

/// An iteration or quadrature failed to converge, or produced non-finite values.
class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string& what) : Error(what) {}
};

/// An energy bracket that contains no eigenvalue of the requested index.
class LevelNotFound : public NumericalFailure {
public:
    explicit LevelNotFound(const std::string& what) : NumericalFailure(what) {}
};

} // namespace pf
