#pragma once

#include <stdexcept>
#include <string>

namespace kerrpqd {

// Base of every error thrown by the library. `code()` is the short
// machine-readable tag the CLI prints as `error=<code>`.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

    // Numerical failures map to CLI exit 3, everything else to exit 2.
    virtual bool numerical() const noexcept { return false; }

private:
    std::string code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& detail) : Error("InvalidArgument", detail) {}
};

class NumericalError : public Error {
public:
    using Error::Error;
    bool numerical() const noexcept override { return true; }
};

// Re(A) of a characteristic-function exponent is not positive definite: the
// Fourier transform does not exist as a function.
class NotIntegrable : public NumericalError {
public:
    explicit NotIntegrable(const std::string& detail) : NumericalError("NotIntegrable", detail) {}
};

// sigma - s is singular or indefinite for a Gaussian PQD.
class OrderingTooHigh : public NumericalError {
public:
    explicit OrderingTooHigh(const std::string& detail) : NumericalError("OrderingTooHigh", detail) {}
};

// Detector PQD requested at s <= 1 - 2/eta_D.
class OrderingTooLow : public NumericalError {
public:
    explicit OrderingTooLow(const std::string& detail) : NumericalError("OrderingTooLow", detail) {}
};

class CutoffTooSmall : public NumericalError {
public:
    CutoffTooSmall(const std::string& detail, double tail_mass)
        : NumericalError("CutoffTooSmall", detail), tail_mass_(tail_mass) {}
    double tail_mass() const noexcept { return tail_mass_; }

private:
    double tail_mass_;
};

class TailBoundExceeded : public NumericalError {
public:
    TailBoundExceeded(const std::string& detail, double bound)
        : NumericalError("TailBoundExceeded", detail), bound_(bound) {}
    double bound() const noexcept { return bound_; }

private:
    double bound_;
};

class PreconditionViolated : public NumericalError {
public:
    explicit PreconditionViolated(const std::string& detail)
        : NumericalError("PreconditionViolated", detail) {}
};

}  // namespace kerrpqd
