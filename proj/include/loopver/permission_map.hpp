#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopver/region.hpp"

namespace loopver::resources {

enum class CellRelation { Equal, Disjoint, Unknown };

// Compares two locations under a region's constraints. Distinct arrays are
// disjoint; same-array cells compare by the sign of the index difference.
// Unknown is treated conservatively by all callers.
CellRelation cell_equal(const Cell& a, const Cell& b, const Region& r);

struct PermDiffEntry {
  Cell cell;
  Fraction have;
  Fraction need;
};

struct PermDiff {
  std::vector<PermDiffEntry> missing;   // need > have
  std::vector<PermDiffEntry> leftover;  // have > need
  bool equal() const { return missing.empty() && leftover.empty(); }
};

// Cell -> fraction with entries in (0,1]. Insertion merges cells that are
// provably equal on the region, so each location has at most one entry.
class PermissionMap {
 public:
  // Throws CapExceeded when a location would go above 1.
  void add(const Cell& cell, const Fraction& frac, const Region& r,
           Span span = {});

  // False when the location holds less than `frac`.
  [[nodiscard]] bool subtract(const Cell& cell, const Fraction& frac,
                              const Region& r);

  Fraction fraction_at(const Cell& cell, const Region& r) const;

  PermDiff diff_against(const PermissionMap& expected, const Region& r) const;

  const std::map<Cell, Fraction>& entries() const { return entries_; }

 private:
  std::map<Cell, Fraction> entries_;
};

// Evaluates clause guards on the region (which must decide them) and folds
// the granted atoms into a map. Throws CapExceeded on over-allocation.
PermissionMap normalize(const std::vector<NormClause>& clauses,
                        const Region& r);

}  // namespace loopver::resources
