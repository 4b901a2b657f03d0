#pragma once

#include <stdexcept>
#include <string>

namespace rotlab {

enum class ErrorCode {
  NearBoundary,
  InvalidGenus,
  InvalidWord,
  NumericalEscape,
  BudgetExceeded,
  NotHyperbolic,
  NotSimple,
  AmbiguousCrossing,
  TubeTooWide,
  NotRankTwo,
  AmbiguousPosition,
  ResolutionTooCoarse,
  PreconditionFailed,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rotlab
