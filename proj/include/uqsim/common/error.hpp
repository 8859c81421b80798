#pragma once

#include <stdexcept>
#include <string>

namespace uqsim {

/// Bad user input: malformed files, invalid arguments, unsupported requests.
/// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a trustworthy result
/// (divergence, degenerate measure, step underflow). Exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace uqsim
