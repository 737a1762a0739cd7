#pragma once

#include <stdexcept>
#include <string>

namespace lll {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  instance_inconsistency,
  condition_failed,
  budget_exhausted,
  extraction_threshold,
  out_of_range,
  tape_exhausted,
};

const char* to_string(ErrorCode code);

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

}  // namespace lll
