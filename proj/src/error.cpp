#include "wlsep/error.hpp"

namespace wlsep {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::InvalidConfig: return "invalid config";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Degenerate: return "numerical error";
  }
  return "error";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig: return 2;
    case ErrorKind::Degenerate: return 4;
    case ErrorKind::InvalidInput:
    case ErrorKind::Data:
    case ErrorKind::Io: return 3;
  }
  return 1;
}

}  // namespace wlsep
