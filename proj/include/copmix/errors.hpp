#pragma once

#include <stdexcept>
#include <string>

namespace copmix {

// Invalid input: out-of-domain arguments, dimension mismatches, malformed
// files. The CLI maps these to exit code 2.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A well-posed computation that failed numerically (non-PD matrix, EM
// collapse, no converged candidate). The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace copmix
