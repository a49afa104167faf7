#pragma once

#include <string>

#include "loopver/ast.hpp"

namespace loopver::frontend {

// Spacing knob exists so lexing can be shown whitespace-insensitive:
// Wide doubles every separator, Compact minimizes it. Token streams of the
// two renderings must agree.
enum class PrettyStyle { Normal, Compact, Wide };

std::string pretty_arith(const ArithExpr& e);
std::string pretty_guard(const BoolGuard& g);
std::string pretty_atom(const PermAtom& a);
std::string pretty_clause(const ContractClause& c);

std::string to_source(const Program& p, PrettyStyle style = PrettyStyle::Normal);

}  // namespace loopver::frontend
