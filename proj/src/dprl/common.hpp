#pragma once

#include <stdexcept>
#include <string>

namespace dprl {

enum class ErrorCode {
  invalid_argument,
  shape_mismatch,
  domain_error,
  provenance_error,
  schema_error,
  parse_error,
  io_error,
  unsupported_dimension,
  insufficient_data,
};

// All core routines report failures through this exception; the C layer maps
// the code to a dprl_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace dprl
