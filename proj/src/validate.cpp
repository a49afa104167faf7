#include "loopver/validate.hpp"

#include <set>

#include "loopver/parser.hpp"
#include "loopver/pretty.hpp"

namespace loopver::frontend {

using resources::AffineExpr;
using resources::Cell;
using resources::Constraint;
using resources::Fraction;
using resources::Guard;
using resources::NormClause;

namespace {

struct Validator {
  const Program& prog;
  std::map<std::string, ParamKind> params;
  std::string iter_var;
  std::string bound_param;

  explicit Validator(const Program& p) : prog(p) {}

  ParamKind param_kind(const std::string& name, Span sp) const {
    auto it = params.find(name);
    if (it == params.end())
      fail(Code::UnknownIdentifier, "'" + name + "' is not declared", sp);
    return it->second;
  }

  // Affine normalization over (iter_var, bound_param).
  AffineExpr to_affine(const ArithExpr& e, Code err, const char* what) const {
    switch (e.kind) {
      case ArithExpr::Kind::IntLit:
        return resources::aff_const(e.value);
      case ArithExpr::Kind::Var: {
        if (e.name == iter_var) return AffineExpr{1, 0, 0};
        ParamKind k = param_kind(e.name, e.span);
        if (k == ParamKind::IntArray)
          fail(Code::KindMismatch, "array '" + e.name + "' used as a scalar",
               e.span);
        if (e.name == bound_param) return AffineExpr{0, 1, 0};
        fail(err,
             std::string(what) + " may only mention '" + iter_var +
                 "' and the loop bound parameter, not '" + e.name + "'",
             e.span);
      }
      case ArithExpr::Kind::Add:
        return resources::aff_add(to_affine(e.kids[0], err, what),
                                  to_affine(e.kids[1], err, what));
      case ArithExpr::Kind::Sub:
        return resources::aff_sub(to_affine(e.kids[0], err, what),
                                  to_affine(e.kids[1], err, what));
      case ArithExpr::Kind::Neg:
        return resources::aff_neg(to_affine(e.kids[0], err, what));
      case ArithExpr::Kind::Mul: {
        AffineExpr l = to_affine(e.kids[0], err, what);
        AffineExpr r = to_affine(e.kids[1], err, what);
        if (l.is_constant()) return resources::aff_scale(r, l.c);
        if (r.is_constant()) return resources::aff_scale(l, r.c);
        fail(err, std::string(what) + " is not affine", e.span);
      }
      case ArithExpr::Kind::Min:
      case ArithExpr::Kind::Cell:
        fail(err, std::string(what) + " is not affine", e.span);
    }
    fail(Code::Internal, "unhandled expression kind", e.span);
  }

  Constraint to_constraint(const CmpExpr& c) const {
    AffineExpr l = to_affine(c.lhs, Code::NonAffineGuard, "guard");
    AffineExpr r = to_affine(c.rhs, Code::NonAffineGuard, "guard");
    switch (c.rel) {
      case RelOp::Eq: return resources::eq0(resources::aff_sub(l, r));
      case RelOp::Le: return resources::ge0(resources::aff_sub(r, l));
      case RelOp::Lt:
        return resources::ge0(resources::aff_sub(
            resources::aff_sub(r, l), resources::aff_const(1)));
      case RelOp::Ge: return resources::ge0(resources::aff_sub(l, r));
      case RelOp::Gt:
        return resources::ge0(resources::aff_sub(
            resources::aff_sub(l, r), resources::aff_const(1)));
    }
    fail(Code::Internal, "unhandled relation", c.span);
  }

  NormClause to_clause(const ContractClause& c) const {
    if (param_kind(c.atom.array, c.atom.span) != ParamKind::IntArray)
      fail(Code::KindMismatch, "'" + c.atom.array + "' is not an array",
           c.atom.span);
    if (c.atom.frac.is_zero() || c.atom.frac > Fraction::one())
      fail(Code::InvalidFraction,
           "permission amount " + c.atom.frac.str() + " is outside (0,1]",
           c.atom.span);
    NormClause out;
    for (const auto& g : c.guard) out.guard.push_back(to_constraint(g));
    out.atom.cell =
        Cell{c.atom.array,
             to_affine(c.atom.index, Code::NonAffineIndex, "index")};
    out.atom.frac = c.atom.frac;
    out.atom.span = c.atom.span;
    return out;
  }

  // Collects distinct read cells from a value expression, left to right.
  void collect_reads(const ArithExpr& e, std::vector<Cell>& out) const {
    if (e.kind == ArithExpr::Kind::Cell) {
      if (param_kind(e.name, e.span) != ParamKind::IntArray)
        fail(Code::KindMismatch, "'" + e.name + "' is not an array", e.span);
      Cell c{e.name, to_affine(e.kids[0], Code::NonAffineIndex, "index")};
      for (const auto& have : out)
        if (have == c) return;
      out.push_back(c);
      return;
    }
    if (e.kind == ArithExpr::Kind::Var) {
      if (e.name == iter_var) return;
      ParamKind k = param_kind(e.name, e.span);
      if (k == ParamKind::IntArray)
        fail(Code::KindMismatch, "array '" + e.name + "' used as a scalar",
             e.span);
      return;
    }
    for (const auto& kid : e.kids) collect_reads(kid, out);
  }

  // Bounds are affine in at most one scalar parameter and never mention the
  // iteration variable.
  AffineExpr bound_expr(const ArithExpr& e) const {
    AffineExpr a = to_affine(e, Code::InvalidBound, "loop bound");
    if (a.ci != 0)
      fail(Code::InvalidBound, "loop bound mentions the iteration variable",
           e.span);
    return a;
  }

  void find_bound_param(const ArithExpr& e) {
    if (e.kind == ArithExpr::Kind::Var && e.name != iter_var) {
      auto it = params.find(e.name);
      if (it == params.end())
        fail(Code::UnknownIdentifier, "'" + e.name + "' is not declared",
             e.span);
      if (it->second == ParamKind::IntArray)
        fail(Code::InvalidBound, "loop bound uses array '" + e.name + "'",
             e.span);
      if (bound_param.empty()) {
        bound_param = e.name;
      } else if (bound_param != e.name) {
        fail(Code::InvalidBound,
             "loop bounds use more than one parameter ('" + bound_param +
                 "' and '" + e.name + "')",
             e.span);
      }
    }
    for (const auto& kid : e.kids) find_bound_param(kid);
  }

  ValidatedProgram run() {
    ValidatedProgram vp;
    vp.program = prog;

    for (const auto& p : prog.params) {
      if (!params.emplace(p.name, p.kind).second)
        fail(Code::DuplicateParam, "parameter '" + p.name + "' redeclared",
             p.span);
    }
    const LoopSpec& loop = prog.loop;
    iter_var = loop.iter_var;
    if (params.count(iter_var))
      fail(Code::DuplicateParam,
           "iteration variable '" + iter_var + "' shadows a parameter",
           loop.span);

    find_bound_param(loop.lower);
    find_bound_param(loop.upper);
    vp.iter_var = iter_var;
    vp.bound_param = bound_param;

    AffineExpr lo = bound_expr(loop.lower);
    AffineExpr hi = bound_expr(loop.upper);
    if (loop.inclusive_upper)
      hi = resources::aff_add(hi, resources::aff_const(1));
    vp.bounds = resources::LoopBounds{lo, hi};

    for (const auto& c : loop.requires_clauses)
      vp.pre.push_back(to_clause(c));
    for (const auto& c : loop.ensures_clauses)
      vp.post.push_back(to_clause(c));

    // Labels first so sends can target later statements.
    for (size_t k = 0; k < loop.body.size(); ++k) {
      const Statement& s = loop.body[k];
      if (s.label) {
        if (!vp.labels.emplace(*s.label, k).second)
          fail(Code::DuplicateLabel, "label '" + *s.label + "' reused",
               s.span);
      }
    }

    size_t send_ordinal = 0;
    for (size_t k = 0; k < loop.body.size(); ++k) {
      const Statement& s = loop.body[k];
      BodyItem item;
      item.label = s.label;
      item.span = s.span;
      if (s.kind == Statement::Kind::Assign) {
        item.kind = BodyItem::Kind::Assign;
        if (param_kind(s.array, s.span) != ParamKind::IntArray)
          fail(Code::KindMismatch, "'" + s.array + "' is not an array",
               s.span);
        item.write =
            Cell{s.array, to_affine(s.index, Code::NonAffineIndex, "index")};
        collect_reads(s.rhs, item.reads);
      } else {
        item.kind = BodyItem::Kind::Send;
        for (const auto& cl : s.formula) {
          if (!cl.guard.empty())
            fail(Code::UnsupportedSendFormula,
                 "send formulas must be unguarded permission atoms",
                 cl.atom.span);
          item.formula.push_back(to_clause(cl));
        }
        auto it = vp.labels.find(s.target_label);
        if (it == vp.labels.end())
          fail(Code::UnknownSendTarget,
               "send targets unknown label '" + s.target_label + "'", s.span);
        item.target = s.target_label;
        item.target_index = it->second;
        item.distance = s.distance;
        item.send_ordinal = send_ordinal++;
        vp.send_sites.push_back(k);
      }
      vp.body.push_back(std::move(item));
    }
    return vp;
  }
};

}  // namespace

ValidatedProgram validate(const Program& p) { return Validator(p).run(); }

ValidatedProgram load_program(const std::string& source) {
  return validate(parse(source));
}

}  // namespace loopver::frontend
