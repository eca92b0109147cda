#pragma once

#include <stdexcept>
#include <string>

namespace bvpkit {

/// Malformed input text (bad header line, non-numeric field, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally valid input that cannot be analyzed (missing group,
/// duplicate manifest entry, empty window set, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input that makes the requested computation degenerate
/// (constant series, zero-variance group, ...).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Tensor/batch shape disagreement.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Non-finite loss encountered while training.
class TrainingDivergenceError : public std::runtime_error {
public:
    TrainingDivergenceError(const std::string& msg, std::size_t batch_index)
        : std::runtime_error(msg), batch_index(batch_index) {}
    std::size_t batch_index;
};

}  // namespace bvpkit
