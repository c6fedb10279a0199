#pragma once

#include <stdexcept>
#include <string>

namespace chernoff_lab {

/// Thrown when a convolution or power would exceed the configured atom cap.
class AtomCapError : public std::runtime_error {
public:
    explicit AtomCapError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a function evaluation produces a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by the CLI layer on unusable configs (unknown names, missing fields).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chernoff_lab
