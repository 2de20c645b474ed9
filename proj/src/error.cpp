#include "optomech/error.hpp"

namespace optomech {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveEffectiveFrequency: return "NonPositiveEffectiveFrequency";
    case ErrorCode::ComplexThreshold: return "ComplexThreshold";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::OutsideNormalPhase: return "OutsideNormalPhase";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace optomech
