#pragma once

#include <stdexcept>
#include <string>

namespace specgr {

// Bad arguments or a violated precondition at an API or CLI boundary.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent on-disk data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scorer or drafter was asked for something it cannot do (e.g. encode).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical input the algorithms cannot work with (non-finite values,
// too few distinct points for the requested codebook).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The identification digit ran out of codes for one semantic prefix.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specgr
