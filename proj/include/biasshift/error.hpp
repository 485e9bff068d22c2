#pragma once

#include <stdexcept>
#include <string>

namespace biasshift {

// Malformed or invalid input data (bad file, bad cell, bad flag value).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed inputs that do not agree with each other, e.g. two score
// tables with different attribute sets.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace biasshift
