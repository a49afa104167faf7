#pragma once

#include <string>
#include <vector>

#include "loopver/validate.hpp"

namespace loopver::encode {

// One generated procedure. Abstract procedures (no body) carry only a
// contract; loop_body carries the rewritten statements.
struct Procedure {
  std::string name;
  std::vector<std::string> params;          // rendered, e.g. "int a[]"
  std::vector<std::string> requires_lines;
  std::vector<std::string> ensures_lines;
  std::vector<std::string> body_lines;
  bool has_body = false;
};

struct EncodedObligations {
  std::string is_iteration_def;
  std::vector<Procedure> procedures;  // loop_main, loop_body, send/recv pairs
};

// Rewrites the annotated loop into contract-checking procedures:
// loop_main quantifies the iteration contract over the loop range,
// loop_body checks one iteration with sends replaced by send_phi_k calls
// and recv_phi_k calls inserted before each transfer target.
EncodedObligations encode(const frontend::ValidatedProgram& vp);

std::string render(const EncodedObligations& enc);

}  // namespace loopver::encode
