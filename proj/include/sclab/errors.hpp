#pragma once

#include <stdexcept>
#include <string>

namespace sclab {

/// An argument lies outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A run configuration is internally inconsistent (CFL, scheme, grid, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested geometric object (ball, window, bump support) does not fit
/// inside the computed domain.
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// A regression has too little usable data to produce a slope.
struct FitError : std::runtime_error {
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sclab
