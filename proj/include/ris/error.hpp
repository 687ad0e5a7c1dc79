#pragma once

#include <stdexcept>
#include <string>

namespace ris {

/// Raised when an argument violates a documented precondition
/// (dimension mismatch, unsupported code length, out-of-range angle, ...).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a value is well formed but the requested quantity is not
/// defined for it (e.g. the normalized average PDAF away from half-wavelength spacing).
class UnsupportedConfiguration : public std::domain_error {
public:
    explicit UnsupportedConfiguration(const std::string& what) : std::domain_error(what) {}
};

}  // namespace ris
