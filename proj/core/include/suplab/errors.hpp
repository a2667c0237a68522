#pragma once

#include <stdexcept>
#include <string>

namespace suplab {

// Precondition on an argument was violated (k <= 2, empty grid, zero base with k <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// x = 0 for Y/K, or the Langer turning point w = 0.
class SingularPointError : public DomainError {
public:
    using DomainError::DomainError;
};

// An element was required to lie in a subgroup and does not.
class MembershipError : public DomainError {
public:
    using DomainError::DomainError;
};

// Adaptive refinement gave up; carries the best estimate obtained so far.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_(best_estimate), error_(error_estimate) {}
    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return error_; }

private:
    double best_;
    double error_;
};

// An enumeration or summation would exceed its configured element budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two routes that must agree did not (branch bookkeeping, sign conventions, positivity).
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An inequality with explicit constants was violated.
class BoundViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace suplab
