#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nowcast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that violates a documented contract: bad config, malformed file,
/// inconsistent dimensions, out-of-range dates. The CLI maps these to exit 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutOfRangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Observation attached to a (day, slot) that the system does not declare.
class SchemaError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Caller passed results that do not belong together (e.g. a filter result
/// from a different system).
class ContractError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : ValidationError(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Numerical breakdown (non-PSD covariance, singular innovation variance,
/// non-finite likelihood). The CLI maps these to exit 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class FilterFailure : public NumericalError {
public:
    FilterFailure(std::int64_t day, const std::string& what)
        : NumericalError("day " + std::to_string(day) + ": " + what), day_(day) {}

    std::int64_t day() const noexcept { return day_; }

private:
    std::int64_t day_;
};

/// Likelihood is not finite at the starting parameters.
class InitializationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The optimizer never found a point with a finite objective besides the start.
class OptimizerError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace nowcast
