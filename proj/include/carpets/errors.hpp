#pragma once

#include <stdexcept>
#include <string>

namespace carpets {

enum class Err {
  EmptyDigitSet,
  DigitOutOfRange,
  BaseOrderViolation,
  DuplicateCell,
  WidthNotLessThanHeight,
  OverlapViolation,
  MassViolation,
  SelfSimilarNotEmbeddable,
  NoRoot,
  OuterMissesCarpet,
  BudgetExceeded,
  AmbientMismatch,
  SelfSimilarUnsupported,
  RegionEmpty,
  ParseError,
};

const char* err_name(Err code);

/// Library-wide exception. `code()` distinguishes validation failures
/// (rejected inputs) from budget failures (enumeration caps); the CLI maps
/// the former to exit 2 and the latter to exit 3.
class CarpetError : public std::runtime_error {
 public:
  CarpetError(Err code, const std::string& message)
      : std::runtime_error(std::string(err_name(code)) + ": " + message),
        code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& message) {
  throw CarpetError(code, message);
}

}  // namespace carpets
