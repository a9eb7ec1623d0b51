#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpca {

enum class ErrorCode {
  InvalidInput,
  NoConvergence,
  RankDeficient,
  EmptyInput,
  InsufficientData,
  SingularScatter,
  DegenerateColumn,
  InvalidK,
  DimMismatch,
  DegenerateStage,
  InvalidDirection,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception thrown by every fallible operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const char* msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace rpca
