#include "loopver/aggregator.hpp"

#include <algorithm>
#include <optional>

namespace loopver::agg {

using resources::AffineExpr;
using resources::Constraint;
using resources::Fraction;
using resources::LoopBounds;
using resources::NormClause;
using resources::aff_add;
using resources::aff_const;
using resources::aff_neg;
using resources::aff_sub;
using resources::aff_subst_iter;

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}
long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

// Shared state for one aggregation: every comparison that only stabilizes
// beyond some N raises the threshold, and any shape the segment algebra
// cannot express flips the whole summary to concrete mode.
struct SignCtx {
  long long threshold = 0;
  bool fallback = false;

  void raise(long long t) { threshold = std::max(threshold, t); }
};

// Sign of e(N) for all N >= threshold, where e has no i term. Total order:
// lexicographic on (cn, c) once N is large enough.
int cmp_n(const AffineExpr& e, SignCtx& ctx) {
  if (e.cn == 0) return e.c < 0 ? -1 : e.c > 0 ? 1 : 0;
  if (e.cn > 0) {
    // e > 0 iff N > -c/cn
    ctx.raise(floor_div(-e.c, e.cn) + 1);
    return 1;
  }
  ctx.raise(floor_div(e.c, -e.cn) + 1);
  return -1;
}

int cmp_affine(const AffineExpr& a, const AffineExpr& b, SignCtx& ctx) {
  return cmp_n(aff_sub(a, b), ctx);
}

// One clause's worth of permission: [from, to) on array, totalling frac
// per cell, present for every N >= the ctx threshold.
struct Contribution {
  std::string array;
  AffineExpr from;
  AffineExpr to;
  Fraction frac;
};

// Folds a pure-N condition into the existence threshold. Returns false if
// the contribution can never exist; sets ctx.fallback for conditions that
// are not of the form N >= t.
bool fold_ge0(const AffineExpr& e, SignCtx& ctx) {
  if (e.cn == 0) return e.c >= 0;
  if (e.cn > 0) {
    ctx.raise(ceil_div(-e.c, e.cn));
    return true;
  }
  ctx.fallback = true;  // upper bound on N: holds only for small N
  return true;
}

bool fold_eq0(const AffineExpr& e, SignCtx& ctx) {
  if (e.cn == 0) return e.c == 0;
  ctx.fallback = true;  // pins N to a single value
  return true;
}

bool fold(const Constraint& c, SignCtx& ctx) {
  return c.kind == Constraint::Kind::Eq0 ? fold_eq0(c.expr, ctx)
                                          : fold_ge0(c.expr, ctx);
}

// nullopt: contribution is empty (guard unsatisfiable for large N, or the
// iteration range collapses). ctx.fallback is sticky across clauses.
std::optional<Contribution> build_contribution(const NormClause& clause,
                                               const LoopBounds& bounds,
                                               SignCtx& ctx) {
  const AffineExpr& index = clause.atom.cell.index;

  // A guard equality on i pins the iteration to one affine point.
  const Constraint* pin = nullptr;
  for (const auto& c : clause.guard)
    if (c.kind == Constraint::Kind::Eq0 && c.expr.ci != 0) { pin = &c; break; }

  if (pin) {
    long long a = pin->expr.ci;
    if (a != 1 && a != -1) { ctx.fallback = true; return std::nullopt; }
    // a*i + cn*N + c == 0  =>  i = -(cn*N + c)/a
    AffineExpr istar{0, a == 1 ? -pin->expr.cn : pin->expr.cn,
                     a == 1 ? -pin->expr.c : pin->expr.c};
    for (const auto& c : clause.guard) {
      if (&c == pin) continue;
      Constraint sub{aff_subst_iter(c.expr, istar), c.kind};
      if (!fold(sub, ctx)) return std::nullopt;
    }
    if (!fold_ge0(aff_sub(istar, bounds.lo), ctx)) return std::nullopt;
    if (!fold_ge0(aff_sub(aff_sub(bounds.hi, istar), aff_const(1)), ctx))
      return std::nullopt;
    AffineExpr jstar = aff_subst_iter(index, istar);
    return Contribution{clause.atom.cell.array, jstar,
                        aff_add(jstar, aff_const(1)), clause.atom.frac};
  }

  // Interval case: narrow [L, H) by the guard's i inequalities.
  AffineExpr L = bounds.lo, H = bounds.hi;
  for (const auto& c : clause.guard) {
    if (c.expr.ci == 0) {
      if (!fold(c, ctx)) return std::nullopt;
      continue;
    }
    long long a = c.expr.ci;
    if (a != 1 && a != -1) { ctx.fallback = true; return std::nullopt; }
    if (a == 1) {
      // i >= -(cn*N + c)
      AffineExpr cand{0, -c.expr.cn, -c.expr.c};
      if (cmp_affine(cand, L, ctx) > 0) L = cand;
    } else {
      // i <= cn*N + c, so i < cn*N + c + 1
      AffineExpr cand{0, c.expr.cn, c.expr.c + 1};
      if (cmp_affine(cand, H, ctx) < 0) H = cand;
    }
  }
  if (cmp_affine(L, H, ctx) >= 0) return std::nullopt;

  if (index.ci == 1) {
    AffineExpr off{0, index.cn, index.c};
    return Contribution{clause.atom.cell.array, aff_add(L, off),
                        aff_add(H, off), clause.atom.frac};
  }
  if (index.ci == -1) {
    // j = -i + off maps [L, H) onto [off - H + 1, off - L + 1)
    AffineExpr off{0, index.cn, index.c};
    return Contribution{clause.atom.cell.array,
                        aff_add(aff_sub(off, H), aff_const(1)),
                        aff_add(aff_sub(off, L), aff_const(1)),
                        clause.atom.frac};
  }
  if (index.ci == 0) {
    AffineExpr count = aff_sub(H, L);
    if (count.cn != 0)
      fail(
          Code::ZeroCoefficient,
          "cell " + cell_str(clause.atom.cell, "i", "N") +
              " is claimed by a parametric number of iterations",
          clause.atom.span);
    if (count.c <= 0) return std::nullopt;
    return Contribution{clause.atom.cell.array, index,
                        aff_add(index, aff_const(1)),
                        frac_scale(clause.atom.frac, count.c)};
  }
  ctx.fallback = true;
  return std::nullopt;
}

void assemble_array(const std::string& array,
                    const std::vector<Contribution>& contribs, SignCtx& ctx,
                    std::vector<Segment>& out) {
  std::vector<AffineExpr> points;
  for (const auto& c : contribs) {
    points.push_back(c.from);
    points.push_back(c.to);
  }
  std::sort(points.begin(), points.end(),
            [&](const AffineExpr& a, const AffineExpr& b) {
              return cmp_affine(a, b, ctx) < 0;
            });
  points.erase(std::unique(points.begin(), points.end()), points.end());

  for (size_t k = 0; k + 1 < points.size(); ++k) {
    Fraction total = Fraction::zero();
    for (const auto& c : contribs) {
      if (cmp_affine(c.from, points[k], ctx) <= 0 &&
          cmp_affine(points[k + 1], c.to, ctx) <= 0)
        total = frac_add(total, c.frac);
    }
    if (total.is_zero()) continue;
    if (Fraction::one() < total)
      fail(Code::CapExceeded,
                      "permission on " + array + "[" +
                          aff_str(points[k], "i", "N") + "] sums to " +
                          total.str() + " which exceeds 1");
    if (!out.empty() && out.back().to == points[k] &&
        out.back().total == total)
      out.back().to = points[k + 1];
    else
      out.push_back({points[k], points[k + 1], total});
  }
}

}  // namespace

ConcreteFootprint aggregate_at(const std::vector<NormClause>& clauses,
                               const LoopBounds& bounds, long long n) {
  ConcreteFootprint fp;
  long long lo = bounds.lo.eval(0, n), hi = bounds.hi.eval(0, n);
  for (long long i = lo; i < hi; ++i) {
    for (const auto& cl : clauses) {
      if (!guard_holds(cl.guard, i, n)) continue;
      long long j = cl.atom.cell.index.eval(i, n);
      auto& slot = fp[cl.atom.cell.array][j];
      slot = frac_add(slot, cl.atom.frac);
      if (Fraction::one() < slot)
        fail(Code::CapExceeded,
                        "permission on " + cl.atom.cell.array + "[" +
                            std::to_string(j) + "] sums to " + slot.str() +
                            " which exceeds 1 at N=" + std::to_string(n),
                        cl.atom.span);
    }
  }
  return fp;
}

FootprintSummary aggregate(const std::vector<NormClause>& clauses,
                           const LoopBounds& bounds, long long assume_bound) {
  SignCtx ctx;
  std::map<std::string, std::vector<Contribution>> per_array;
  for (const auto& cl : clauses) {
    auto contrib = build_contribution(cl, bounds, ctx);
    if (ctx.fallback) break;
    if (contrib) per_array[contrib->array].push_back(*contrib);
  }

  FootprintSummary out;
  if (ctx.fallback) {
    out.mode = FootprintSummary::Mode::ConcreteOnly;
    out.valid_from = 0;
    out.concrete_bound = assume_bound;
    for (long long n = 0; n <= assume_bound; ++n) aggregate_at(clauses, bounds, n);
    return out;
  }

  for (auto& [array, contribs] : per_array)
    assemble_array(array, contribs, ctx, out.arrays[array]);
  out.valid_from = std::max<long long>(3, ctx.threshold);
  out.concrete_bound = assume_bound;

  // Cells below the symbolic range are checked by direct summation.
  for (long long n = 0; n < out.valid_from; ++n) aggregate_at(clauses, bounds, n);
  return out;
}

ConcreteFootprint evaluate_at(const FootprintSummary& summary,
                              const std::vector<NormClause>& clauses,
                              const LoopBounds& bounds, long long n) {
  if (summary.mode == FootprintSummary::Mode::Symbolic &&
      n >= summary.valid_from) {
    ConcreteFootprint fp;
    for (const auto& [array, segs] : summary.arrays) {
      for (const auto& s : segs) {
        long long from = s.from.eval(0, n), to = s.to.eval(0, n);
        for (long long j = from; j < to; ++j) fp[array][j] = s.total;
      }
    }
    return fp;
  }
  return aggregate_at(clauses, bounds, n);
}

namespace {

std::string footprint_cell_str(const std::string& array, long long j) {
  return array + "[" + std::to_string(j) + "]";
}

void describe_diff(long long n, const ConcreteFootprint& req,
                   const ConcreteFootprint& ens,
                   std::vector<std::string>& out) {
  auto frac_at = [](const ConcreteFootprint& fp, const std::string& a,
                    long long j) {
    auto it = fp.find(a);
    if (it == fp.end()) return Fraction::zero();
    auto jt = it->second.find(j);
    return jt == it->second.end() ? Fraction::zero() : jt->second;
  };
  std::map<std::string, std::map<long long, char>> keys;
  for (const auto& [a, cells] : req)
    for (const auto& [j, f] : cells) keys[a][j] = 1;
  for (const auto& [a, cells] : ens)
    for (const auto& [j, f] : cells) keys[a][j] = 1;
  for (const auto& [a, cells] : keys) {
    for (const auto& [j, unused] : cells) {
      Fraction r = frac_at(req, a, j), e = frac_at(ens, a, j);
      if (r == e) continue;
      if (out.size() >= 8) return;
      out.push_back("N=" + std::to_string(n) + ": " +
                    footprint_cell_str(a, j) + " requires " + r.str() +
                    " vs ensures " + e.str());
    }
  }
}

std::string segments_str(const FootprintSummary& s) {
  std::string out;
  for (const auto& [array, segs] : s.arrays) {
    if (!out.empty()) out += "; ";
    out += array + ":";
    for (size_t k = 0; k < segs.size(); ++k) {
      if (k) out += ",";
      out += "[" + aff_str(segs[k].from, "i", "N") + "," +
             aff_str(segs[k].to, "i", "N") + "):" + segs[k].total.str();
    }
  }
  return out.empty() ? "(empty)" : out;
}

}  // namespace

BalanceReport check_balance(const frontend::ValidatedProgram& vp,
                            long long assume_bound) {
  BalanceReport rep;
  rep.requires_fp = aggregate(vp.pre, vp.bounds, assume_bound);
  rep.ensures_fp = aggregate(vp.post, vp.bounds, assume_bound);

  bool symbolic =
      rep.requires_fp.mode == FootprintSummary::Mode::Symbolic &&
      rep.ensures_fp.mode == FootprintSummary::Mode::Symbolic;
  bool shapes_equal = symbolic && rep.requires_fp.arrays == rep.ensures_fp.arrays;

  long long sweep = std::max<long long>(
      {8, rep.requires_fp.valid_from, rep.ensures_fp.valid_from});
  if (!symbolic) sweep = std::max(sweep, assume_bound);
  bool concrete_equal = true;
  for (long long n = 0; n <= sweep; ++n) {
    auto r = evaluate_at(rep.requires_fp, vp.pre, vp.bounds, n);
    auto e = evaluate_at(rep.ensures_fp, vp.post, vp.bounds, n);
    if (r != e) {
      concrete_equal = false;
      describe_diff(n, r, e, rep.differences);
      if (rep.differences.size() >= 8) break;
    }
  }

  if (symbolic && !shapes_equal && concrete_equal)
    rep.differences.push_back("footprints differ for large N: requires " +
                              segments_str(rep.requires_fp) + " vs ensures " +
                              segments_str(rep.ensures_fp));

  rep.preserving = concrete_equal && (!symbolic || shapes_equal);
  return rep;
}

}  // namespace loopver::agg
