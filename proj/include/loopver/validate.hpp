#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopver/ast.hpp"
#include "loopver/contracts.hpp"

namespace loopver::frontend {

// A body statement with its heap accesses normalized to affine cells.
// Items are parallel to Program::loop.body; rhs evaluation still walks the
// AST node at the same index.
struct BodyItem {
  enum class Kind { Assign, Send };
  Kind kind = Kind::Assign;
  std::optional<std::string> label;
  Span span;
  // Assign
  resources::Cell write;
  std::vector<resources::Cell> reads;  // distinct cells, source order
  // Send
  std::vector<resources::NormClause> formula;
  std::string target;
  size_t target_index = 0;
  long long distance = 0;
  size_t send_ordinal = 0;
};

struct ValidatedProgram {
  Program program;

  std::string iter_var;
  std::string bound_param;  // empty when both bounds are constant
  resources::LoopBounds bounds;  // upper already exclusive

  std::vector<resources::NormClause> pre;
  std::vector<resources::NormClause> post;
  std::vector<BodyItem> body;
  std::vector<size_t> send_sites;           // body indices, source order
  std::map<std::string, size_t> labels;     // label -> body index
};

// Name resolution, affine normalization and structural checks. Throws
// DiagError (UnknownIdentifier, DuplicateLabel, UnknownSendTarget,
// NonAffineIndex, ...).
ValidatedProgram validate(const Program& p);

// parse + validate.
ValidatedProgram load_program(const std::string& source);

}  // namespace loopver::frontend
