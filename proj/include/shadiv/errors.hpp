#pragma once

#include <stdexcept>
#include <string>

namespace shadiv {

enum class ErrorCode {
  ZeroInput,
  BoundExceeded,
  NonPrime,
  PrecisionExhausted,
  PointNotOnCurve,
  DegenerateCurve,
  ExcludedPrime,
  ConductorUnavailable,
  NoWitnessClass,
  InternalPigeonholeViolation,
  SchemaError,
  ParseError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shadiv
