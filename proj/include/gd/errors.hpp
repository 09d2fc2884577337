#pragma once

#include <stdexcept>
#include <string>

namespace gd {

/// Argument outside the mathematical domain of an operation (n = 0, p < 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quadrature or study setup that cannot produce trustworthy numbers.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function evaluator produced a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double abscissa)
        : std::runtime_error(what), abscissa_(abscissa) {}

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

}  // namespace gd
