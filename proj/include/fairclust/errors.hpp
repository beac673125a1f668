#ifndef FAIRCLUST_ERRORS_HPP
#define FAIRCLUST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fairclust {

// Bad user input: malformed files, inconsistent parameters. CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside a solver (divergence, exhausted budget where a
// result cannot be salvaged). CLI exit code 3.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fairclust

#endif  // FAIRCLUST_ERRORS_HPP
