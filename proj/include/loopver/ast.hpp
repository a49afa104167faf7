#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopver/diag.hpp"
#include "loopver/fraction.hpp"

namespace loopver::frontend {

// Value expressions: integer arithmetic over scalars, array cells and
// constants with +, -, * and min. Index positions must additionally be
// affine; that is enforced by validate, not by the parser.
struct ArithExpr {
  enum class Kind { IntLit, Var, Cell, Add, Sub, Mul, Min, Neg };
  Kind kind = Kind::IntLit;
  long long value = 0;          // IntLit
  std::string name;             // Var, Cell (array name)
  std::vector<ArithExpr> kids;  // Cell: [index]; binary: [l, r]; Neg: [e]
  Span span;
};

enum class RelOp { Eq, Lt, Le, Gt, Ge };

struct CmpExpr {
  ArithExpr lhs;
  RelOp rel = RelOp::Eq;
  ArithExpr rhs;
  Span span;
};

// Conjunction of comparisons; empty means "true".
using BoolGuard = std::vector<CmpExpr>;

struct PermAtom {
  std::string array;
  ArithExpr index;
  resources::Fraction frac;
  Span span;
};

// One guarded atom. "g ==> a1 ** a2" is parsed into one clause per atom,
// each carrying the guard.
struct ContractClause {
  BoolGuard guard;
  PermAtom atom;
};

struct Statement {
  enum class Kind { Assign, Send };
  Kind kind = Kind::Assign;
  std::optional<std::string> label;
  Span span;
  // Assign
  std::string array;
  ArithExpr index;
  ArithExpr rhs;
  // Send
  std::vector<ContractClause> formula;
  std::string target_label;
  long long distance = 0;
};

enum class ParamKind { IntScalar, IntArray, ConstScalar };

struct Param {
  std::string name;
  ParamKind kind = ParamKind::IntScalar;
  Span span;
};

struct LoopSpec {
  std::string iter_var;
  ArithExpr lower;
  ArithExpr upper;
  bool inclusive_upper = false;
  std::vector<ContractClause> requires_clauses;
  std::vector<ContractClause> ensures_clauses;
  std::vector<Statement> body;
  Span span;
};

struct Program {
  std::vector<Param> params;
  LoopSpec loop;
};

// Structural equality, ignoring spans. Used by round-trip checks.
bool struct_eq(const ArithExpr& a, const ArithExpr& b);
bool struct_eq(const Program& a, const Program& b);

}  // namespace loopver::frontend
