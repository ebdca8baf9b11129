// errors.hpp -- exception types shared across the library.
//
// domain_error marks a violated precondition or bad input (CLI exit code 2).
// consistency_error marks an internal cross-check failure, e.g. the oracle
// producing a complex expectation value for a Hermitian observable (exit 3).
#pragma once

#include <stdexcept>
#include <string>

namespace ghzlab {

struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ghzlab
