#pragma once

#include <stdexcept>
#include <string>

namespace dilute {

// Bad user input: unknown names, malformed flags, infeasible parameters.
// The CLI maps this family to exit code 1, everything else to 2.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mathematically invalid request (division by a series with zero constant
// term, evaluation on a branch cut, odd monomials where evens are required).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Request exceeds a configured bound (enumeration depth, dense matrix size).
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation not available for this object (e.g. exact factorial moments of
// a model that only carries asymptotics).
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical routine could not reach the requested tolerance; carries what it
// actually achieved so callers can decide whether the estimate is usable.
struct accuracy_error : std::runtime_error {
    double achieved;
    accuracy_error(const std::string& msg, double got)
        : std::runtime_error(msg), achieved(got) {}
};

// Over-determined exact linear problem with inconsistent data; the residual
// string describes the first moment that failed to match.
struct no_solution_error : std::runtime_error {
    std::string residual;
    no_solution_error(const std::string& msg, std::string res)
        : std::runtime_error(msg), residual(std::move(res)) {}
};

} // namespace dilute
