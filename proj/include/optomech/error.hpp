#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optomech {

enum class ErrorCode {
  InvalidArgument,
  NonPositiveEffectiveFrequency,
  ComplexThreshold,
  NoSignChange,
  NumericalFailure,
  Unstable,
  OutsideNormalPhase,
  InvalidStep,
  TooShort,
  Config,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optomech
