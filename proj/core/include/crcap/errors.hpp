// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_ERRORS_HPP
#define CRCAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace crcap {

/// Raised when an argument lies outside the mathematical domain of an operation
/// (negative gains, probabilities outside (0,1), boundary error variances, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative or quadrature routine cannot meet its tolerance.
/// Carries the best error estimate that was reached.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error = 0.0)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

namespace detail {

[[noreturn]] inline void throw_domain(const std::string& where, const std::string& what) {
    throw DomainError(where + ": " + what);
}

} // namespace detail

} // namespace crcap

#endif
