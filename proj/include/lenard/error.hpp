#ifndef LENARD_ERROR_HPP
#define LENARD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lenard {

enum class ErrorCode {
  NotClosed,
  NoSolution,
  NotSkew,
  DimensionMismatch,
  Empty,
  Unbounded,
  SyntaxError,
  ExponentError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}
  ErrorCode code() const { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const { return detail_; }

private:
  ErrorCode code_;
  std::string detail_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotClosed: return "NOT_CLOSED";
    case ErrorCode::NoSolution: return "NO_SOLUTION";
    case ErrorCode::NotSkew: return "NOT_SKEW";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::Empty: return "EMPTY";
    case ErrorCode::Unbounded: return "UNBOUNDED";
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::ExponentError: return "EXPONENT_ERROR";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

}  // namespace lenard

#endif  // LENARD_ERROR_HPP
