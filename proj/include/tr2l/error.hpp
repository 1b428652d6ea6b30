#pragma once

#include <stdexcept>
#include <string>

namespace tr2l {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad parameter values (non-positive timescales, empty sweeps, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A time argument fell outside the window a protocol is defined on.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Root finding did not reach the requested tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// The Hamiltonian has a vanishing gap, so the mixing angle is undefined.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// A matrix expected to be unitary is not.
class NonUnitaryError : public Error {
public:
  using Error::Error;
};

} // namespace tr2l
