#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sinklab {

// Bad input: parameters, configuration, grid or domain violations.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A well-posed request that the numerics could not complete.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The constant-sink closure denominator 1 - 2*sigma*alpha0*G(0,s|0) vanished.
class ClosurePoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Denominator p + q - omega of the literal single-exponential forms vanished.
class LiteralPoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepUnderflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SeriesDivergenceError : public NumericalError {
public:
    SeriesDivergenceError(const std::string& message, std::vector<double> factors)
        : NumericalError(message), factors_(std::move(factors)) {}

    // |2 sigma beta G(0, s + j alpha | 0)| for j = 0, 1, ...
    const std::vector<double>& factors() const noexcept { return factors_; }

private:
    std::vector<double> factors_;
};

} // namespace sinklab
