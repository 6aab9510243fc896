#pragma once

#include <stdexcept>
#include <string>

namespace ftt {

// Error taxonomy mirrored by the CLI exit codes:
// ConfigError -> 2, DataError -> 3, ModelError -> 4.

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ftt
