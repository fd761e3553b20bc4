#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nisim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain numeric argument.
class DomainError : public Error {
public:
    using Error::Error;
};

/// API misuse (empty sequence, unsupported argument combination).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Input data that violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Query outside the range covered by tabulated data.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Operation not available for the selected mode.
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

/// Numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::size_t subdivisions, double error_estimate)
        : Error(what), subdivisions_(subdivisions), error_estimate_(error_estimate) {}

    std::size_t subdivisions() const noexcept { return subdivisions_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    std::size_t subdivisions_;
    double error_estimate_;
};

/// Configuration document error, carrying the 1-based line number (0 for flags).
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& reason)
        : ValidationError(line == 0 ? reason : "line " + std::to_string(line) + ": " + reason),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Measured-data file error, carrying the 1-based data row number.
class IngestionError : public ValidationError {
public:
    IngestionError(std::size_t row, const std::string& reason)
        : ValidationError("row " + std::to_string(row) + ": " + reason), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class ComparisonError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace nisim
