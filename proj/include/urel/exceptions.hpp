#pragma once

#include <stdexcept>
#include <string>

namespace urel {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live on different Hilbert spaces or outcome sets.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A state, effect, kernel or observable violates its type invariants.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Partial inverse applied outside the range of its source map.
class NotInRange : public Error {
public:
    NotInRange(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Observable is not locally representable by the measurement over the state.
class NotRepresentable : public Error {
public:
    NotRepresentable(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A classical observable passed as a representative does not reproduce its target.
class ConstraintViolated : public Error {
public:
    ConstraintViolated(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace urel
