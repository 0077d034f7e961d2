#pragma once

#include <stdexcept>
#include <string>

namespace rapport {

// Bad inputs: malformed files, out-of-range values, schema mismatches.
// The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failures: undefined statistics, degenerate problems, non-convergence.
// The CLI maps these to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rapport
