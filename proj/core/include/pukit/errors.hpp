#pragma once

#include <stdexcept>
#include <string>

namespace pukit {

// Bad arguments or malformed in-memory data (empty sets, out-of-range values,
// mismatched lengths).
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed configuration: unknown keys, unparsable values, missing required
// fields. Maps to CLI exit code 2.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable/unwritable files, malformed data files. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// An estimator could not produce a value (e.g. every candidate threshold is
// excluded). Maps to CLI exit code 4.
class EstimationFailureError : public std::runtime_error {
public:
    explicit EstimationFailureError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite gradients or parameters during training. Maps to CLI exit code 4.
class TrainingDivergenceError : public std::runtime_error {
public:
    explicit TrainingDivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was asked for data it does not have (e.g. purity diagnostics
// without hidden labels).
class UnsupportedOperationError : public std::runtime_error {
public:
    explicit UnsupportedOperationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pukit
