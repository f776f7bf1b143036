#pragma once

#include <stdexcept>
#include <string>

namespace gasket {

// Precondition / parameter-range violations.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Size guardrails (matrix dimension, step counts).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Solver / quadrature failures.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gasket
