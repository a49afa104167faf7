#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopver/permission_map.hpp"
#include "loopver/validate.hpp"

namespace loopver::checker {

enum class Action { Read, Write, Send, Receive };
const char* action_name(Action a);

enum class Direction { Forward, Backward };
const char* direction_name(Direction d);

struct TraceStep {
  std::string stmt;  // label, or "stmt<k>" for unlabeled statements
  Action action = Action::Read;
  resources::Cell cell;
  resources::Fraction before;
  resources::Fraction after;
};

// Permission transferred by send site `send_site` arrives immediately
// before the target statement, in the iteration `distance` later, with the
// formula re-indexed to that receiving iteration.
struct ReceivePoint {
  size_t send_site = 0;  // body index of the send
  std::vector<resources::NormClause> formula;  // instantiated at i - d
  resources::Guard existence;                  // is_iteration(i - d)
};

// Receive points keyed by target label.
std::map<std::string, std::vector<ReceivePoint>> receive_points(
    const frontend::ValidatedProgram& vp);

struct SymbolicState {
  resources::Region region;
  resources::PermissionMap perms;
  std::vector<ReceivePoint> pending_receives;
};

// Applies one send to the state: where is_iteration(i+d) holds the formula
// is subtracted, where it fails the send is a no-op. A region that does not
// decide the existence condition is split, so more than one state can come
// back. Throws SendWithoutPermission / NonPositiveDistance.
std::vector<SymbolicState> apply_send(const SymbolicState& state,
                                      const frontend::BodyItem& send,
                                      const resources::LoopBounds& bounds);

struct RegionResult {
  resources::Region region;
  bool pass = false;
  std::optional<Diagnostic> diag;
  std::vector<TraceStep> trace;
};

struct SendUse {
  size_t site = 0;  // body index
  std::optional<std::string> label;
  std::string target;
  long long distance = 0;
  Direction direction = Direction::Forward;
};

struct CheckReport {
  bool pass = false;
  std::optional<Diagnostic> primary;
  std::vector<RegionResult> regions;
  std::vector<SendUse> sends_used;
};

// Per-iteration symbolic check: start from the requires footprint, replay
// the body with receive injection and send subtraction, and demand the
// final holdings equal the ensures footprint exactly, in every region.
CheckReport check_iteration(const frontend::ValidatedProgram& vp);

std::string stmt_name(const frontend::ValidatedProgram& vp, size_t body_index);

}  // namespace loopver::checker
