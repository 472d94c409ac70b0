#pragma once

#include <stdexcept>
#include <string>

namespace conjecturing {

// Bad engine configuration: unknown operator, no eligible invariants, ...
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data: parse failures, ragged rows, non-numeric targets.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A tree refers to a column or operator that does not exist.
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Raised when an internal store invariant is found broken.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace conjecturing
