#pragma once

#include <stdexcept>

namespace cpslat {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: unknown identifiers, schema violations, malformed files.
class InputError : public Error {
public:
    using Error::Error;
};

/// An exact (exponential) algorithm was asked to run past its guard.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Syntax error in an input document; the message carries position info.
class ParseError : public InputError {
public:
    using InputError::InputError;
};

} // namespace cpslat
