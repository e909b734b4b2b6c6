#pragma once

#include <stdexcept>
#include <string>

namespace wfalab {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDomain,
  kOverflow,
  kParse,
  kIo,
  kPrecondition,
  kGuard,
  kUnbounded,
  kInternal,
};

const char* error_code_name(ErrorCode code);

// All failures raised by the core carry a code so that the C boundary can
// map them onto status values without string matching.
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

}  // namespace wfalab
