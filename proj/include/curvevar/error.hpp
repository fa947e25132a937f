#pragma once

#include <stdexcept>
#include <string>

namespace curvevar {

/// Bad input: malformed parameters, violated preconditions, unknown names.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation could not be carried out (degenerate metric, guard violation, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace curvevar
