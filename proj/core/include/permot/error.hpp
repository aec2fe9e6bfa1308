#pragma once

#include <stdexcept>
#include <string>

namespace permot {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix or vector shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument is outside the domain of the operation (zero divisor,
// non-invertible comparison map, unsupported motive shape, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A referenced symbol, relation or object is missing or malformed.
class SymbolError : public Error {
 public:
  using Error::Error;
};

// Registry is still open, or mutated after being frozen.
class RegistryStateError : public Error {
 public:
  using Error::Error;
};

}  // namespace permot
