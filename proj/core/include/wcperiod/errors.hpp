#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wcperiod {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (t outside [0, omega], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

/// An eigenvalue iteration did not converge within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// c is (numerically) an eigenvalue of the period map.
///
/// `eigenvalue()` is the generator eigenvalue lambda with c ~ exp(omega * lambda);
/// for diagonal generators `mode()` carries the offending mode index.
class ResonanceError : public Error {
public:
    ResonanceError(const std::string& what, std::complex<double> eigenvalue, double distance,
                   long mode = 0)
        : Error(what), eigenvalue_(eigenvalue), distance_(distance), mode_(mode) {}

    std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }
    double distance() const noexcept { return distance_; }
    long mode() const noexcept { return mode_; }

private:
    std::complex<double> eigenvalue_;
    double distance_;
    long mode_;
};

/// A closed-form bound is undefined for the given input (e.g. ||A|| = 0).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A certificate needs a constant (L, g1, g2) that was not declared.
class MissingConstantError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class InterpolationError : public Error {
public:
    using Error::Error;
};

class AliasingError : public Error {
public:
    using Error::Error;
};

class StepSizeUnderflowError : public Error {
public:
    using Error::Error;
};

/// A fixed-point iteration exhausted its budget. Carries the size of the last update.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double last_update, int iterations)
        : Error(what), last_update_(last_update), iterations_(iterations) {}

    double last_update() const noexcept { return last_update_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_update_;
    int iterations_;
};

} // namespace wcperiod
