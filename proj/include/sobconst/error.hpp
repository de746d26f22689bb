#pragma once

#include <stdexcept>
#include <string>

namespace sobconst {

/// Input outside the mathematical domain of an operation (p <= 1, alpha >= d/p, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, extrapolation, optimizer) failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration file or command-line input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sobconst
