#pragma once

#include <stdexcept>
#include <string>

namespace rdseg {

// Bad arguments: wrong dimensions, out-of-range parameters, empty sets.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// c1 == c2, or a mask that leaves one region empty.
class DegenerateFitting : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

// Unreadable, unwritable or malformed files.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace rdseg
