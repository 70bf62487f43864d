#pragma once

#include <stdexcept>
#include <string>

namespace choicelab
{

/// Malformed input, width mismatch, or a size cap violation.
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace choicelab
