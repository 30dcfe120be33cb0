#pragma once

#include <stdexcept>
#include <string>

namespace camsim {

// Bad configuration: profile invariants, option values, preconditions.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data: file parsing, width mismatches, missing ids.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace camsim
