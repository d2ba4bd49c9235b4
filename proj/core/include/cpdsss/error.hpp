#pragma once

#include <stdexcept>
#include <string>

namespace cpdsss {

enum class ErrorCode {
  InvalidLength,
  InvalidRoot,
  LengthMismatch,
  DimensionMismatch,
  ImpulseTooLong,
  IndexOutOfRange,
  WindowOverrun,
  MissingEstimate,
  EmptyStream,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception; `code()` identifies the failed contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cpdsss
