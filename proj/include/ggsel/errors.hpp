#pragma once

#include <stdexcept>

namespace ggsel {

// Error taxonomy shared across the library. The CLI maps DataError to exit
// code 2 and NumericalError (incl. FitError) to exit code 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Precondition violations on operation arguments.
class ArgumentError : public Error {
public:
  using Error::Error;
};

// Input outside the numerical domain (overflow guards and the like).
class DomainError : public Error {
public:
  using Error::Error;
};

// Malformed input files, rows, or configuration.
class DataError : public Error {
public:
  using Error::Error;
};

// Numerical breakdown: singular information matrix, non-finite intermediates.
class NumericalError : public Error {
public:
  using Error::Error;
};

// Likelihood maximization failed on every start; message carries diagnostics.
class FitError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace ggsel
