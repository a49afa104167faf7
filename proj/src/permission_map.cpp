#include "loopver/permission_map.hpp"

namespace loopver::resources {

CellRelation cell_equal(const Cell& a, const Cell& b, const Region& r) {
  if (a.array != b.array) return CellRelation::Disjoint;
  AffineExpr d = aff_sub(a.index, b.index);
  if (d.is_zero()) return CellRelation::Equal;
  switch (decide(r, eq0(d))) {
    case Truth::True: return CellRelation::Equal;
    case Truth::False: return CellRelation::Disjoint;
    case Truth::Unknown: return CellRelation::Unknown;
  }
  return CellRelation::Unknown;
}

void PermissionMap::add(const Cell& cell, const Fraction& frac,
                        const Region& r, Span span) {
  if (frac.is_zero()) return;
  for (auto& [have_cell, have_frac] : entries_) {
    if (cell_equal(have_cell, cell, r) == CellRelation::Equal) {
      Fraction sum = frac_add(have_frac, frac);
      if (sum > Fraction::one())
        fail(Code::CapExceeded,
             "permission on " + cell_str(cell, "i", "N") + " sums to " + sum.str() +
                 " which exceeds 1",
             span);
      have_frac = sum;
      return;
    }
  }
  if (frac > Fraction::one())
    fail(Code::CapExceeded,
         "permission on " + cell_str(cell, "i", "N") + " is " + frac.str() +
             " which exceeds 1",
         span);
  entries_.emplace(cell, frac);
}

bool PermissionMap::subtract(const Cell& cell, const Fraction& frac,
                             const Region& r) {
  if (frac.is_zero()) return true;
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (cell_equal(it->first, cell, r) == CellRelation::Equal) {
      auto rest = frac_sub(it->second, frac);
      if (!rest) return false;
      if (rest->is_zero())
        entries_.erase(it);
      else
        it->second = *rest;
      return true;
    }
  }
  return false;
}

Fraction PermissionMap::fraction_at(const Cell& cell, const Region& r) const {
  for (const auto& [have_cell, have_frac] : entries_)
    if (cell_equal(have_cell, cell, r) == CellRelation::Equal)
      return have_frac;
  return Fraction::zero();
}

PermDiff PermissionMap::diff_against(const PermissionMap& expected,
                                     const Region& r) const {
  PermDiff d;
  for (const auto& [cell, need] : expected.entries_) {
    Fraction have = fraction_at(cell, r);
    if (have < need) d.missing.push_back({cell, have, need});
  }
  for (const auto& [cell, have] : entries_) {
    Fraction need = expected.fraction_at(cell, r);
    if (have > need) d.leftover.push_back({cell, have, need});
  }
  return d;
}

PermissionMap normalize(const std::vector<NormClause>& clauses,
                        const Region& r) {
  PermissionMap m;
  for (const auto& cl : clauses) {
    switch (decide(r, cl.guard)) {
      case Truth::True:
        m.add(cl.atom.cell, cl.atom.frac, r, cl.atom.span);
        break;
      case Truth::False:
        break;
      case Truth::Unknown:
        fail(Code::Internal, "region does not decide a clause guard",
             cl.atom.span);
    }
  }
  return m;
}

}  // namespace loopver::resources
