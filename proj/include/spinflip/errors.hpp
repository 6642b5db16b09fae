#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spinflip {

/// Argument outside the domain of a physical formula (non-positive frequency, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Name not found in a registry (material presets, sweep variables).
class LookupError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Quadrature failed to reach the requested tolerance. Carries the best
/// estimate available so callers can decide whether it is usable.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Base class of all configuration problems (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
public:
    ParseError(std::size_t line, const std::string& msg)
        : ConfigError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnitError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnknownKeyError : public ConfigError {
public:
    explicit UnknownKeyError(const std::string& key)
        : ConfigError("unknown key '" + key + "'"), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class MissingKeyError : public ConfigError {
public:
    explicit MissingKeyError(const std::string& key)
        : ConfigError("missing required key '" + key + "'"), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Malformed experiment data file (CLI exit code 4).
class DataError : public std::runtime_error {
public:
    DataError(std::size_t row, const std::string& msg)
        : std::runtime_error("row " + std::to_string(row) + ": " + msg), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace spinflip
