#pragma once
#include <stdexcept>
#include <string>

namespace droplab {

// Bad user input: malformed config, invalid parameter ranges.  CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-convergence, unreachable tolerance.  CLI exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace droplab
