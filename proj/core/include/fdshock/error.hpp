#pragma once

#include <stdexcept>
#include <string>

namespace fdshock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: configuration keys, out-of-range parameters,
/// inconsistent shock data.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Failure while integrating in time (NaN, singular tridiagonal system).
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace fdshock
