#include "marchsim/error.hpp"

namespace marchsim {

const char *to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::UnknownName: return "unknown name";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::GuardExceeded: return "enumeration guard exceeded";
    case ErrorKind::Conformance: return "model conformance error";
  }
  return "error";
}

}  // namespace marchsim
