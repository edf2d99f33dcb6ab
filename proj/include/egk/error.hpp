#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace egk {

// Base of every error thrown by the library. The CLI maps the subclasses
// onto its exit codes (usage 1, data 2, invariant 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a precondition (bad dimensions, bad config, bad flag).
class UsageError : public Error {
public:
    using Error::Error;
};

// Anything wrong with the input data itself.
class DataError : public Error {
public:
    using Error::Error;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : DataError(what), row_(row), column_(column) {}

    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class EmptyDatasetError : public DataError {
public:
    using DataError::DataError;
};

// Input too small or too uniform for the EG pipeline to produce a clustering.
class DegenerateInputError : public DataError {
public:
    using DataError::DataError;
};

// Seed position N falls outside a chunk under the ERROR index policy.
class CentroidIndexError : public DataError {
public:
    CentroidIndexError(const std::string& what, std::size_t chunk)
        : DataError(what), chunk_(chunk) {}

    std::size_t chunk() const { return chunk_; }

private:
    std::size_t chunk_;
};

class MetricUndefinedError : public DataError {
public:
    using DataError::DataError;
};

// A result violated one of its structural guarantees. Always a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace egk
