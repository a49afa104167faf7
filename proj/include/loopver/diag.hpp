#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace loopver {

// Source position, 1-based. line == 0 means "no position".
struct Span {
  int line = 0;
  int col = 0;
};

enum class Code {
  LexError,
  ParseError,
  NestingError,
  UnknownIdentifier,
  DuplicateParam,
  DuplicateLabel,
  UnknownSendTarget,
  KindMismatch,
  NonAffineIndex,
  NonAffineGuard,
  InvalidBound,
  InvalidFraction,
  UnsupportedSendFormula,
  CapExceeded,
  ZeroCoefficient,
  InsufficientRead,
  InsufficientWrite,
  SendWithoutPermission,
  PostconditionMismatch,
  NonPositiveDistance,
  OutOfFootprint,
  ArithmeticOverflow,
  IoError,
  Internal,
};

const char* code_name(Code c);

struct Diagnostic {
  Code code = Code::Internal;
  std::string message;
  Span span;
};

class DiagError : public std::runtime_error {
 public:
  explicit DiagError(Diagnostic d)
      : std::runtime_error(std::string(code_name(d.code)) + ": " + d.message),
        diag_(std::move(d)) {}
  const Diagnostic& diag() const { return diag_; }

 private:
  Diagnostic diag_;
};

[[noreturn]] inline void fail(Code code, std::string msg, Span span = {}) {
  throw DiagError(Diagnostic{code, std::move(msg), span});
}

}  // namespace loopver
