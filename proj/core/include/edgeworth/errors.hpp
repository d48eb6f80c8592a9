#pragma once

#include <stdexcept>
#include <string>

namespace edgeworth {

// Base of every error raised by the library. The category drives CLI exit
// codes: validation-type errors map to 2, integration failures to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A holding fell below the boundary floor where gradients diverge.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

class ProbabilityError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Step-size control diverged (non-finite field, step underflow).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Repeated step halving could not keep the state above the boundary floor.
class BoundaryApproachError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

}  // namespace edgeworth
