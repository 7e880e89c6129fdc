#pragma once

#include <stdexcept>
#include <string>

namespace gdn {

// Exception categories map one-to-one onto CLI exit codes (usage 2, io 3,
// numerical 4).

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gdn
