#pragma once

#include <stdexcept>
#include <string>

namespace wlsep {

/// Broad failure category; the CLI maps each one onto an exit code.
enum class ErrorKind {
  InvalidInput,   // caller passed arguments that violate a precondition
  InvalidConfig,  // run configuration is malformed or inconsistent
  Data,           // input data cannot be used (missing, unfillable, too short)
  Io,             // file system failure
  Degenerate,     // numerical degeneracy (zero variance, rank deficiency)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// Process exit code for an error category: 2 config, 3 data, 4 numerical.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace wlsep
