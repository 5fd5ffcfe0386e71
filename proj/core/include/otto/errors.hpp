#pragma once

#include <stdexcept>

namespace otto {

// Bad or out-of-range input (malformed parameters, broken channel sets).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inputs are well formed but the requested physics does not exist
// (negative merged probability, zero heat input, zero variance).
class PhysicsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace otto
