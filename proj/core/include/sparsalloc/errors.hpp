#pragma once

#include <stdexcept>
#include <string>

namespace sparsalloc {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-conformable operands or a structure whose dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An argument outside the domain of the operation (rate outside [0,1], beta
// above its bound, infeasible mean, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested enumeration is too large for exhaustive mode.
class SizeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed container: bad magic, truncated payload, trailing bytes.
class CorruptFileError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsalloc
