#include "loopver/classifier.hpp"

namespace loopver::classify {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Independent: return "Independent";
    case Kind::ForwardOnly: return "ForwardOnly";
    case Kind::Backward: return "Backward";
    case Kind::Unverified: return "Unverified";
  }
  return "Unverified";
}

const char* pragma_for(Kind k) {
  switch (k) {
    case Kind::Independent: return "independent";
    case Kind::ForwardOnly: return "ivdep";
    default: return "none";
  }
}

Verdict classify(const frontend::ValidatedProgram& vp,
                 const checker::CheckReport& report) {
  Verdict v;
  v.evidence = report.sends_used;
  if (!report.pass) {
    v.kind = Kind::Unverified;
    v.failure = report.primary;
    v.suggested_pragma = pragma_for(v.kind);
    return v;
  }
  if (vp.send_sites.empty()) {
    v.kind = Kind::Independent;
  } else {
    v.kind = Kind::ForwardOnly;
    for (const auto& s : report.sends_used)
      if (s.direction == checker::Direction::Backward) v.kind = Kind::Backward;
  }
  v.suggested_pragma = pragma_for(v.kind);
  return v;
}

}  // namespace loopver::classify
