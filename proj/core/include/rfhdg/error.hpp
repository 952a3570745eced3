#pragma once

#include <stdexcept>
#include <string>

namespace rfhdg {

enum class ErrorCode {
  Alignment,     // subdomain divider not on a mesh line
  Topology,      // incompatible mesh entities
  Layout,        // duplicate or missing column block
  Config,        // inconsistent run/scheme configuration
  NumericInput,  // non-finite matrix or vector entries
  Elimination,   // degenerate local velocity elimination block
  Projection,    // degenerate boundary-trace projection
  Normalization, // requested relative error against a zero-norm field
  Io,            // file read/write failure
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace rfhdg
