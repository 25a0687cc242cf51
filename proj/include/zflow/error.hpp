#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zflow {

enum class ErrorCode {
  PoleAtEvaluationPoint,
  ImproperRational,
  RepeatedPole,
  FinalValueInapplicable,
  ZeroDenominator,
  InvalidParams,
  UnstableParams,
  EmptyRateList,
  ZeroSources,
  ScheduleViolation,
  UnknownKey,
  TypeMismatch,
  InvariantViolation,
  Io,
  MalformedTrace,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PoleAtEvaluationPoint: return "PoleAtEvaluationPoint";
    case ErrorCode::ImproperRational: return "ImproperRational";
    case ErrorCode::RepeatedPole: return "RepeatedPole";
    case ErrorCode::FinalValueInapplicable: return "FinalValueInapplicable";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::UnstableParams: return "UnstableParams";
    case ErrorCode::EmptyRateList: return "EmptyRateList";
    case ErrorCode::ZeroSources: return "ZeroSources";
    case ErrorCode::ScheduleViolation: return "ScheduleViolation";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zflow
