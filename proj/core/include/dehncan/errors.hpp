#pragma once

#include <stdexcept>
#include <string>

namespace dehncan {

// Input that could not be parsed (bad slope syntax, malformed numbers, ...).
// The CLI maps this to exit code 2.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Mathematically well-formed input for which the requested object does not
// exist: no positive angle structure, exceptional filling slope, seed triangle
// violating a separation precondition.  CLI exit code 3.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// The iterative solver hit its iteration cap before reaching the gradient
// tolerance.  CLI exit code 4.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dehncan
