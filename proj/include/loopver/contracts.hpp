#pragma once

#include <string>
#include <vector>

#include "loopver/affine.hpp"
#include "loopver/fraction.hpp"

namespace loopver::resources {

// expr >= 0 or expr == 0 over (i, N). Equalities are canonicalized so the
// first nonzero coefficient is positive.
struct Constraint {
  enum class Kind { Ge0, Eq0 };
  AffineExpr expr;
  Kind kind = Kind::Ge0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
  friend auto operator<=>(const Constraint&, const Constraint&) = default;

  bool holds(long long i, long long n) const {
    long long v = expr.eval(i, n);
    return kind == Kind::Eq0 ? v == 0 : v >= 0;
  }
};

inline Constraint canon(Constraint c) {
  if (c.kind == Constraint::Kind::Eq0) {
    long long lead = c.expr.ci != 0 ? c.expr.ci
                   : c.expr.cn != 0 ? c.expr.cn
                                    : c.expr.c;
    if (lead < 0) c.expr = aff_neg(c.expr);
  }
  return c;
}

inline Constraint ge0(AffineExpr e) { return {e, Constraint::Kind::Ge0}; }
inline Constraint eq0(AffineExpr e) {
  return canon({e, Constraint::Kind::Eq0});
}

// Conjunction; empty means "true".
using Guard = std::vector<Constraint>;

inline bool guard_holds(const Guard& g, long long i, long long n) {
  for (const auto& c : g)
    if (!c.holds(i, n)) return false;
  return true;
}

// A heap location: array name plus normalized affine index.
struct Cell {
  std::string array;
  AffineExpr index;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::string cell_str(const Cell& c, const std::string& iter,
                            const std::string& bound) {
  return c.array + "[" + aff_str(c.index, iter, bound) + "]";
}

struct NormAtom {
  Cell cell;
  Fraction frac;
  Span span;
};

struct NormClause {
  Guard guard;
  NormAtom atom;
};

// Half-open iteration space [lo, hi); both bounds are affine in N only.
struct LoopBounds {
  AffineExpr lo;
  AffineExpr hi;

  Guard is_iteration_at_offset(long long d) const {
    // lo <= i+d && i+d < hi
    AffineExpr iter{1, 0, d};
    return {ge0(aff_sub(iter, lo)),
            ge0(aff_sub(aff_sub(hi, iter), aff_const(1)))};
  }
};

}  // namespace loopver::resources
