#pragma once

#include <stdexcept>
#include <string>

namespace nomsdm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A code violates the n-of-m invariants (duplicate or out-of-range index, n > m).
class InvalidCode : public Error {
public:
    using Error::Error;
};

/// Dimensions of a pattern or matrix do not match the memory they are used with.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Non-finite input or a diverging integration.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A neuron cannot be tuned to the requested firing rate.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents (IDX, weight snapshots, CSV).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Argument outside the accepted domain.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Failure to open, read or write a file.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nomsdm
