#pragma once

#include <stdexcept>
#include <string>

namespace btcecon {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: a violated precondition, a malformed file, an out-of-range field.
/// The CLI maps this to exit status 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation that could not complete on valid input (non-convergence,
/// failing user-supplied path). The CLI maps this to exit status 1.
class ComputationError : public Error {
public:
    using Error::Error;
};

}  // namespace btcecon
