#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mglcop {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input shapes disagree, or a dimension is outside what an operation supports.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Bad configuration or input data (as opposed to a numerical failure).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A requested moment does not exist for the given parameters.
class MomentUndefinedError : public DomainError {
public:
    using DomainError::DomainError;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Likelihood evaluated to NaN/inf; `row` is the offending observation.
class NonFiniteError : public NumericalError {
public:
    NonFiniteError(const std::string& what, long row)
        : NumericalError(what + " (row " + std::to_string(row) + ")"), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::vector<IterationRecord> trace)
        : NumericalError(what), trace_(std::move(trace)) {}
    const std::vector<IterationRecord>& trace() const noexcept { return trace_; }

private:
    std::vector<IterationRecord> trace_;
};

}  // namespace mglcop
