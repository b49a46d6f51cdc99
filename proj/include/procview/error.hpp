#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace procview {

enum class ErrorCode {
  NoFirstElement,
  HorizonExceeded,
  HorizonMismatch,
  TypeMismatch,
  InvalidSpec,
  NoEntryPoint,
  NameCollision,
  ZenoRisk,
  CausalityCycle,
  MissingEnvInput,
  UnknownChannel,
  UnknownStream,
  UnknownComponent,
  InvalidBound,
  MissingBound,
  MeasurementInconclusive,
  InvalidNetwork,
  EvalError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoFirstElement: return "NoFirstElement";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NoEntryPoint: return "NoEntryPoint";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::ZenoRisk: return "ZenoRisk";
    case ErrorCode::CausalityCycle: return "CausalityCycle";
    case ErrorCode::MissingEnvInput: return "MissingEnvInput";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::UnknownStream: return "UnknownStream";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::InvalidBound: return "InvalidBound";
    case ErrorCode::MissingBound: return "MissingBound";
    case ErrorCode::MeasurementInconclusive: return "MeasurementInconclusive";
    case ErrorCode::InvalidNetwork: return "InvalidNetwork";
    case ErrorCode::EvalError: return "EvalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace procview
