#pragma once

#include <stdexcept>
#include <string>

namespace mlob {

// Process exit codes used by the CLI. These values are a stable contract.
enum class ExitCode : int {
  kYes = 0,
  kNo = 1,
  kNoOutBranching = 2,
  kParseError = 3,
  kUnsupportedClass = 4,
  kWidthGuard = 5,
  kUsage = 6,
  kIoError = 7,
  kBudgetExceeded = 8,
  kInternal = 9,
};

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kUnsupportedClass,
  kWidthGuard,
  kTooLarge,
  kPrecondition,
  kGenerationFailed,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return ExitCode::kParseError;
    case ErrorKind::kUnsupportedClass:
    case ErrorKind::kTooLarge:
      return ExitCode::kUnsupportedClass;
    case ErrorKind::kWidthGuard:
      return ExitCode::kWidthGuard;
    case ErrorKind::kIo:
      return ExitCode::kIoError;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kPrecondition:
    case ErrorKind::kGenerationFailed:
      return ExitCode::kUsage;
  }
  return ExitCode::kInternal;
}

}  // namespace mlob
