#ifndef HMD_ERRORS_HPP
#define HMD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hmd {

enum class ErrorCode {
  EmptyEdge,
  NonPositiveEdgeWeight,
  BetaSumMismatch,
  NegativeBeta,
  UnknownBetaVertex,
  VertexOutOfRange,
  DuplicateVertex,
  IsolatedVertex,
  LengthMismatch,
  ZeroVector,
  AllZero,
  TrivialSet,
  EmptyClass,
  TooLarge,
  NotTwoUniform,
  NotOrthogonal,
  StepTooLarge,
  SingleVertex,
  ParseError,
  UnknownCommand,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hmd

#endif
