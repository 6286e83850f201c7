#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pentao {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied an argument that violates a precondition.
class InputError : public Error {
  public:
    using Error::Error;
};

/// Request exceeds a configured size cap or a retry budget.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Malformed text input. `position()` is a byte offset or a 1-based line
/// number depending on the format being parsed.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t position)
        : Error(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// Linear system too ill-conditioned to trust.
class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace pentao
