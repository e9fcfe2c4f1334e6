#pragma once

#include <stdexcept>
#include <string>

namespace tsms {

/// Input rejected before any computation ran (bad dimension, bad parameter,
/// malformed file). The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

class DimensionError : public ValidationError {
public:
    explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

/// A computation started but could not produce a result.
class ComputationError : public std::runtime_error {
public:
    explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tsms
