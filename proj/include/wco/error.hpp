#pragma once

#include <stdexcept>
#include <string>

namespace wco {

/// Malformed function spec, bad flag, or a parameter outside its admissible range.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was called on inputs that violate its hypotheses.
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A prediction does not apply to the inputs (e.g. no interior fixed point).
class InapplicableError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative numerical routine failed to reach its stopping criterion.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wco
