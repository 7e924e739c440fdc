#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace marchsim {

enum class ErrorKind {
  Parse,            // malformed notation, property, scenario or suite text
  InvalidArgument,  // precondition violated by a caller-supplied value
  OutOfRange,       // address or cell outside the configured memory
  UnknownName,      // registry miss or unbound signal/enumerant
  Io,               // file could not be read or written
  GuardExceeded,    // enumeration too large to sweep
  Conformance,      // a trace contradicts the controller model
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Syntax error carrying the 0-based character offset into the source text.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string &message)
      : Error(ErrorKind::Parse,
              message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace marchsim
