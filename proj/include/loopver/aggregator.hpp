#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopver/validate.hpp"

namespace loopver::agg {

// Total permission over cells j in [from, to); endpoints are affine in N.
struct Segment {
  resources::AffineExpr from;
  resources::AffineExpr to;
  resources::Fraction total;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Aggregate footprint of one contract side over all iterations. Symbolic
// segments hold for every N >= valid_from; smaller N are covered by
// concrete instantiation. Index coefficients other than 0 and +-1 force
// ConcreteOnly mode, bounded by --assume-bound.
struct FootprintSummary {
  enum class Mode { Symbolic, ConcreteOnly };
  Mode mode = Mode::Symbolic;
  long long valid_from = 3;
  long long concrete_bound = 16;  // ConcreteOnly: checked for N <= bound
  std::map<std::string, std::vector<Segment>> arrays;
};

using ConcreteFootprint =
    std::map<std::string, std::map<long long, resources::Fraction>>;

// Throws CapExceeded when any cell's total goes above 1 and ZeroCoefficient
// when a constant cell is claimed by a parametric number of iterations.
FootprintSummary aggregate(const std::vector<resources::NormClause>& clauses,
                           const resources::LoopBounds& bounds,
                           long long assume_bound = 16);

// Direct per-cell summation at a concrete N.
ConcreteFootprint aggregate_at(const std::vector<resources::NormClause>& clauses,
                               const resources::LoopBounds& bounds,
                               long long n);

// Summary evaluated at a concrete N: segments where they are valid,
// concrete instantiation below valid_from.
ConcreteFootprint evaluate_at(const FootprintSummary& summary,
                              const std::vector<resources::NormClause>& clauses,
                              const resources::LoopBounds& bounds,
                              long long n);

struct BalanceReport {
  bool preserving = false;
  std::vector<std::string> differences;
  FootprintSummary requires_fp;
  FootprintSummary ensures_fp;
};

// Compares the requires and ensures footprints. Informative only; a
// non-preserving loop is reported, not failed.
BalanceReport check_balance(const frontend::ValidatedProgram& vp,
                            long long assume_bound = 16);

}  // namespace loopver::agg
