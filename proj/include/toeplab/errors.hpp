#pragma once

#include <stdexcept>
#include <string>

namespace toeplab {

// Bad arguments or unparseable input. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Convergence failure, breakdown, singular system. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace toeplab
