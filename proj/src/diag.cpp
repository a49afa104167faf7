#include "loopver/diag.hpp"

namespace loopver {

const char* code_name(Code c) {
  switch (c) {
    case Code::LexError: return "LexError";
    case Code::ParseError: return "ParseError";
    case Code::NestingError: return "NestingError";
    case Code::UnknownIdentifier: return "UnknownIdentifier";
    case Code::DuplicateParam: return "DuplicateParam";
    case Code::DuplicateLabel: return "DuplicateLabel";
    case Code::UnknownSendTarget: return "UnknownSendTarget";
    case Code::KindMismatch: return "KindMismatch";
    case Code::NonAffineIndex: return "NonAffineIndex";
    case Code::NonAffineGuard: return "NonAffineGuard";
    case Code::InvalidBound: return "InvalidBound";
    case Code::InvalidFraction: return "InvalidFraction";
    case Code::UnsupportedSendFormula: return "UnsupportedSendFormula";
    case Code::CapExceeded: return "CapExceeded";
    case Code::ZeroCoefficient: return "ZeroCoefficient";
    case Code::InsufficientRead: return "InsufficientRead";
    case Code::InsufficientWrite: return "InsufficientWrite";
    case Code::SendWithoutPermission: return "SendWithoutPermission";
    case Code::PostconditionMismatch: return "PostconditionMismatch";
    case Code::NonPositiveDistance: return "NonPositiveDistance";
    case Code::OutOfFootprint: return "OutOfFootprint";
    case Code::ArithmeticOverflow: return "ArithmeticOverflow";
    case Code::IoError: return "IoError";
    case Code::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace loopver
