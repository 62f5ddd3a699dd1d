#pragma once

#include <stdexcept>
#include <string>

namespace ssnmg {

enum class ErrorCode {
  invalid_argument,
  level_mismatch,
  not_converged,
  not_spd,
  dimension_guard,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

}  // namespace ssnmg
