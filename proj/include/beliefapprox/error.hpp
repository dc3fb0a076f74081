#pragma once

#include <stdexcept>
#include <string>

namespace beliefapprox {

// Invalid input: malformed parameters, mismatched outcome spaces, bad windows.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation ran but produced no usable result.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace beliefapprox
