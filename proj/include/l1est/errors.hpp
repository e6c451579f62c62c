#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l1est {

// Invalid argument outside an operation's domain (non-finite input, n too small, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Requested polynomial degree exceeds the supported range.
class DegreeOverflowError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Result does not fit in a double.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

// Bad observation in an input sample. Carries the offending index.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Iterative solver did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_spread)
        : std::runtime_error(what), last_spread_(last_spread) {}
    double last_spread() const noexcept { return last_spread_; }

private:
    double last_spread_;
};

class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_(condition_estimate) {}
    double condition_estimate() const noexcept { return condition_; }

private:
    double condition_;
};

// Least-favorable prior construction produced a weight with the wrong sign.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace l1est
