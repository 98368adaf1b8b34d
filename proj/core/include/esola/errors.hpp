#pragma once

#include <stdexcept>
#include <string>

namespace esola {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input bytes do not form a valid container (WAV, marks file) or use an
/// unsupported encoding.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied argument violates an operation's contract
/// (mismatched lengths/rates, out-of-range factors, bad schedules).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The signal is too short for the requested operation.
class SignalTooShort : public Error {
public:
    using Error::Error;
};

/// No periodicity above threshold was found in the analysis band.
class NoPeriodicityFound : public Error {
public:
    using Error::Error;
};

} // namespace esola
