#include "loopver/pretty.hpp"

#include <sstream>

namespace loopver::frontend {

namespace {

// Precedence: additive 1, multiplicative 2, unary 3, atoms 4.
int prec(ArithExpr::Kind k) {
  switch (k) {
    case ArithExpr::Kind::Add:
    case ArithExpr::Kind::Sub: return 1;
    case ArithExpr::Kind::Mul: return 2;
    case ArithExpr::Kind::Neg: return 3;
    default: return 4;
  }
}

void render_arith(const ArithExpr& e, int parent_prec, std::string& out) {
  int p = prec(e.kind);
  bool need_parens = p < parent_prec;
  if (need_parens) out += "(";
  switch (e.kind) {
    case ArithExpr::Kind::IntLit:
      out += std::to_string(e.value);
      break;
    case ArithExpr::Kind::Var:
      out += e.name;
      break;
    case ArithExpr::Kind::Cell:
      out += e.name;
      out += "[";
      render_arith(e.kids[0], 0, out);
      out += "]";
      break;
    case ArithExpr::Kind::Add:
      render_arith(e.kids[0], 1, out);
      out += "+";
      render_arith(e.kids[1], 2, out);
      break;
    case ArithExpr::Kind::Sub:
      render_arith(e.kids[0], 1, out);
      out += "-";
      render_arith(e.kids[1], 2, out);
      break;
    case ArithExpr::Kind::Mul:
      render_arith(e.kids[0], 2, out);
      out += "*";
      render_arith(e.kids[1], 3, out);
      break;
    case ArithExpr::Kind::Neg:
      out += "-";
      render_arith(e.kids[0], 3, out);
      break;
    case ArithExpr::Kind::Min:
      out += "min(";
      render_arith(e.kids[0], 0, out);
      out += ",";
      render_arith(e.kids[1], 0, out);
      out += ")";
      break;
  }
  if (need_parens) out += ")";
}

const char* rel_str(RelOp r) {
  switch (r) {
    case RelOp::Eq: return "==";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "?";
}

struct Printer {
  std::string sp;    // single separator
  std::string nl;    // newline
  std::string ind;   // indent unit

  explicit Printer(PrettyStyle style) {
    switch (style) {
      case PrettyStyle::Normal: sp = " "; nl = "\n"; ind = "  "; break;
      case PrettyStyle::Compact: sp = ""; nl = "\n"; ind = ""; break;
      case PrettyStyle::Wide: sp = "  "; nl = "\n\n"; ind = "    "; break;
    }
  }

  std::string clause(const ContractClause& c) const {
    std::string out;
    if (!c.guard.empty()) {
      for (size_t k = 0; k < c.guard.size(); ++k) {
        if (k) out += sp + "&&" + sp;
        out += pretty_arith(c.guard[k].lhs) + sp + rel_str(c.guard[k].rel) +
               sp + pretty_arith(c.guard[k].rhs);
      }
      out += sp + "==>" + sp;
    }
    out += atom(c.atom);
    return out;
  }

  std::string atom(const PermAtom& a) const {
    return "perm(" + a.array + "[" + pretty_arith(a.index) + "]," + sp +
           a.frac.str() + ")";
  }

  std::string statement(const Statement& s) const {
    std::string out;
    if (s.label) out += *s.label + ":" + sp;
    if (s.kind == Statement::Kind::Assign) {
      out += s.array + "[" + pretty_arith(s.index) + "]" + sp + "=" + sp +
             pretty_arith(s.rhs) + ";";
    } else {
      out += "send" + (sp.empty() ? std::string(" ") : sp);
      for (size_t k = 0; k < s.formula.size(); ++k) {
        if (k) out += sp + "**" + sp;
        out += clause(s.formula[k]);
      }
      out += (sp.empty() ? std::string(" ") : sp) + "to" +
             (sp.empty() ? std::string(" ") : sp) + s.target_label + "," + sp +
             std::to_string(s.distance) + ";";
    }
    return out;
  }

  std::string run(const Program& p) const {
    std::ostringstream out;
    for (const auto& par : p.params) {
      switch (par.kind) {
        case ParamKind::IntScalar: out << "int " << par.name << ";"; break;
        case ParamKind::ConstScalar:
          out << "const int " << par.name << ";";
          break;
        case ParamKind::IntArray: out << "int " << par.name << "[];"; break;
      }
      out << nl;
    }
    if (!p.params.empty()) out << nl;
    const LoopSpec& l = p.loop;
    out << "for" << sp << "(" << l.iter_var << sp << "=" << sp
        << pretty_arith(l.lower) << ";" << sp << l.iter_var << sp
        << (l.inclusive_upper ? "<=" : "<") << sp << pretty_arith(l.upper)
        << ";" << sp << l.iter_var << "++)" << nl;
    if (!l.requires_clauses.empty() || !l.ensures_clauses.empty()) {
      out << "/*@";
      bool first = true;
      for (const auto& c : l.requires_clauses) {
        out << (first ? std::string(" ") : nl + ind + ind) << "requires "
            << clause(c) << ";";
        first = false;
      }
      for (const auto& c : l.ensures_clauses) {
        out << (first ? std::string(" ") : nl + ind + ind) << "ensures "
            << clause(c) << ";";
        first = false;
      }
      out << " @*/" << nl;
    }
    out << "{" << nl;
    for (const auto& s : l.body) {
      out << ind;
      if (s.kind == Statement::Kind::Send) out << "//@ ";
      out << statement(s) << nl;
    }
    out << "}" << nl;
    return out.str();
  }
};

}  // namespace

std::string pretty_arith(const ArithExpr& e) {
  std::string out;
  render_arith(e, 0, out);
  return out;
}

std::string pretty_guard(const BoolGuard& g) {
  std::string out;
  for (size_t k = 0; k < g.size(); ++k) {
    if (k) out += " && ";
    out += pretty_arith(g[k].lhs) + " " + rel_str(g[k].rel) + " " +
           pretty_arith(g[k].rhs);
  }
  return out;
}

std::string pretty_atom(const PermAtom& a) {
  return Printer(PrettyStyle::Normal).atom(a);
}

std::string pretty_clause(const ContractClause& c) {
  return Printer(PrettyStyle::Normal).clause(c);
}

std::string to_source(const Program& p, PrettyStyle style) {
  return Printer(style).run(p);
}

}  // namespace loopver::frontend
