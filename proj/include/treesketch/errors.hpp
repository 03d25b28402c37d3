#pragma once

#include <stdexcept>
#include <string>

namespace treesketch {

// Base error for the library. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data that fails a contract (parameter ranges, shapes, degenerate geometry).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem or decoding failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace treesketch
