#pragma once

#include <stdexcept>
#include <string>

namespace helixlab {

/// Bad inputs: malformed configs, inconsistent domains, out-of-range parameters.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A query point or curve left the region where the data is defined.
class DomainError : public ValidationError {
public:
    explicit DomainError(const std::string& what) : ValidationError(what) {}
};

/// Evaluation at (or too close to) a pole of the expression.
class PoleError : public ValidationError {
public:
    explicit PoleError(const std::string& what) : ValidationError(what) {}
};

/// An iteration or adaptive quadrature failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_residual(achieved) {}
    double achieved_residual;
};

class QuadratureError : public ConvergenceError {
public:
    QuadratureError(const std::string& what, double achieved)
        : ConvergenceError(what, achieved) {}
};

/// A checked inequality's hypotheses do not hold for the supplied data.
class HypothesisError : public std::runtime_error {
public:
    HypothesisError(const std::string& item, const std::string& detail)
        : std::runtime_error("hypothesis '" + item + "' failed: " + detail), failed_item(item) {}
    std::string failed_item;
};

} // namespace helixlab
