#pragma once

#include <stdexcept>
#include <string>

namespace tjeffreys {

/// Process exit codes shared by every CLI command.
enum class ExitCode : int {
    Success = 0,
    Validation = 2,
    ImproperPosterior = 3,
    NumericalFailure = 4,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::NumericalFailure; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Validation; }
};

/// Bad input data or configuration, detected before any computation.
class ValidationError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Validation; }
};

class RankDeficiencyError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Validation; }
};

/// An integral that should be finite failed to stabilize.
class DivergenceError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Refusal to sample from a posterior that cannot be proper.
class ImproperPosteriorError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::ImproperPosterior; }
};

}  // namespace tjeffreys
