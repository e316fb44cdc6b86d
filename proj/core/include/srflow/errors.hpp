#ifndef SRFLOW_ERRORS_HPP
#define SRFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace srflow {

/// Variable counts of two polynomials disagree, or a variable id is out of range.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed user input (expression text, algebra file, CLI parameter).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
struct precondition_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Numerical failure (step underflow, step budget exhausted, singular point).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A mathematically impossible state was reached; always a bug.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace srflow

#endif
