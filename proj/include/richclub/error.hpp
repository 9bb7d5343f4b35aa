#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace richclub {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or invalid input data. `line` is 1-based when known, 0 otherwise.
class InputError : public Error {
public:
    explicit InputError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyNetworkError : public InputError {
public:
    EmptyNetworkError() : InputError("no inter-node flow records; network is empty") {}
};

// Invalid parameters: scan settings, null recipes, generator specs.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Node geometry does not cover the nodes that must be exported.
class GeometryError : public Error {
public:
    using Error::Error;
};

}  // namespace richclub
