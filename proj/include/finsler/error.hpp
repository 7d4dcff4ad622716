#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsler {

// Base of every library error. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mismatched dimensions, mixed fields, malformed arguments: caller bugs.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A base point whose radius lies outside the metric's radius domain.
class OutOfDomain : public Error {
public:
    explicit OutOfDomain(double radius, const std::string& what)
        : Error(what), radius_(radius) {}
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

// A distance was requested for a metric that takes negative values.
class NonPositiveMetric : public Error {
public:
    using Error::Error;
};

// Numeric failure that is not a domain violation (no valid initialization,
// non-unimodular map passed to the dim-2 probe, failed oracle validation...).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace finsler
