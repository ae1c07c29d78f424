#pragma once

#include <stdexcept>
#include <string>

namespace nhqa {

// Failure of a numerical procedure (integration, special-function
// evaluation, root bracketing).  Argument and precondition violations use
// std::invalid_argument instead.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nhqa
