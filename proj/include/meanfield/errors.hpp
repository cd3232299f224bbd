#pragma once

#include <stdexcept>
#include <string>

namespace mfl {

// Configuration / input validation failures (CLI exit code 2).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures during time stepping (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct CflError : NumericalError {
    explicit CflError(const std::string& what) : NumericalError(what) {}
};

} // namespace mfl
