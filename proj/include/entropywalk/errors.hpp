#pragma once

#include <stdexcept>
#include <string>

namespace entropywalk {

/// Invalid parameters or an unusable run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or missing input data (CLI exit code 3).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mutation that cannot be applied to the current graph.
class MutationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative method failed to converge within its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace entropywalk
