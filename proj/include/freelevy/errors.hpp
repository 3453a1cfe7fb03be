#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "freelevy/jet.hpp"

namespace freelevy {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration: unknown catalog name, bad JSON, missing flag.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (e.g. z not in the lower half-plane).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A law or measure was rejected on mathematical grounds: not freely
/// selfdecomposable, infinite log-moment, invalid Lévy measure.
class RejectionError : public Error {
public:
    using Error::Error;
};

/// Operation needs a representation the spec does not carry.
class UnsupportedRepresentation : public Error {
public:
    using Error::Error;
};

/// An iterative or refinement procedure did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trace = {})
        : Error(what), trace_(std::move(trace)) {}

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// Newton / fixed-point failure in the F-inverse solve; carries the last iterate.
class SolverError : public ConvergenceError {
public:
    SolverError(const std::string& what, cplx last_iterate, double residual)
        : ConvergenceError(what), last_(last_iterate), residual_(residual) {}

    cplx last_iterate() const noexcept { return last_; }
    double residual() const noexcept { return residual_; }

private:
    cplx last_;
    double residual_;
};

} // namespace freelevy
