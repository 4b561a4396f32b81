#pragma once

#include <stdexcept>
#include <string>

namespace gkcs {

// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A series or quadrature did not reach its tolerance within the allowed work.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Level index beyond the valid range of a truncated spectrum.
class SpectrumRangeError : public Error {
 public:
  using Error::Error;
};

// A dimensionless energy e_i with i >= 1 vanished, so rho_n is zero.
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

class InvalidChainError : public Error {
 public:
  using Error::Error;
};

class IncompatibleStatesError : public Error {
 public:
  using Error::Error;
};

// Time grid too coarse to resolve the classical period.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

}  // namespace gkcs
