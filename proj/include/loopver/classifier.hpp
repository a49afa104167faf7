#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopver/body_checker.hpp"

namespace loopver::classify {

enum class Kind { Independent, ForwardOnly, Backward, Unverified };

const char* kind_name(Kind k);    // "Independent", ...
const char* pragma_for(Kind k);   // "independent", "ivdep", "none"

struct Verdict {
  Kind kind = Kind::Unverified;
  std::string suggested_pragma = "none";
  std::vector<checker::SendUse> evidence;   // send sites with directions
  std::optional<Diagnostic> failure;        // set iff Unverified
};

// Pure function of check pass/fail and send/target positions. A loop with
// no sends is Independent; sends whose receive point is after the send
// point are forward (safe under ivdep); any backward send forces
// sequential execution.
Verdict classify(const frontend::ValidatedProgram& vp,
                 const checker::CheckReport& report);

}  // namespace loopver::classify
