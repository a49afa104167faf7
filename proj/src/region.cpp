#include "loopver/region.hpp"

#include <algorithm>

namespace loopver::resources {

namespace {

constexpr long long kInf = 4'000'000'000'000'000'000LL;

long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long long ceil_div(long long a, long long b) {
  return -floor_div(-a, b);
}

// Integer feasibility by eliminating i (Fourier-Motzkin) and then scanning
// the one-variable system over N. Exact whenever every i coefficient lies
// in {-1,0,1}, which covers loop bounds, is_iteration conditions and the
// guard shapes validation accepts; larger coefficients degrade to the real
// relaxation, which can only err by keeping an empty region.
bool feasible_constraints(const std::vector<Constraint>& cs) {
  std::vector<AffineExpr> ges;
  for (const auto& c : cs) {
    ges.push_back(c.expr);
    if (c.kind == Constraint::Kind::Eq0) ges.push_back(aff_neg(c.expr));
  }

  std::vector<AffineExpr> nonly, low, up;
  for (const auto& e : ges) {
    if (e.ci == 0) nonly.push_back(e);
    else if (e.ci > 0) low.push_back(e);
    else up.push_back(e);
  }
  // (-a')*low + a*up cancels i; with unit coefficients this is the exact
  // integer condition for an i to exist between the bounds.
  for (const auto& l : low)
    for (const auto& u : up)
      nonly.push_back(aff_add(aff_scale(l, -u.ci), aff_scale(u, l.ci)));

  long long n_lo = -kInf, n_hi = kInf;
  for (const auto& e : nonly) {
    if (e.cn == 0) {
      if (e.c < 0) return false;
      continue;
    }
    if (e.cn > 0)
      n_lo = std::max(n_lo, ceil_div(-e.c, e.cn));
    else
      n_hi = std::min(n_hi, floor_div(-e.c, e.cn));
  }
  return n_lo <= n_hi;
}

}  // namespace

void Region::add(const Constraint& c) {
  Constraint cc = canon(c);
  if (cc.expr.is_constant()) {
    bool ok = cc.kind == Constraint::Kind::Eq0 ? cc.expr.c == 0
                                               : cc.expr.c >= 0;
    if (!ok) trivially_empty_ = true;
    return;  // constant-true constraints carry no information
  }
  for (const auto& have : constraints_)
    if (have == cc) return;
  constraints_.push_back(cc);
}

bool Region::contains(long long i, long long n) const {
  if (trivially_empty_) return false;
  for (const auto& c : constraints_)
    if (!c.holds(i, n)) return false;
  return true;
}

std::string Region::str(const std::string& iter,
                        const std::string& bound) const {
  if (trivially_empty_) return "false";
  if (constraints_.empty()) return "true";
  std::string out;
  for (const auto& c : constraints_) {
    if (!out.empty()) out += " && ";
    // Render "P rel M" with the positive terms on the left.
    AffineExpr pos{std::max(c.expr.ci, 0LL), std::max(c.expr.cn, 0LL),
                   std::max(c.expr.c, 0LL)};
    AffineExpr neg{std::max(-c.expr.ci, 0LL), std::max(-c.expr.cn, 0LL),
                   std::max(-c.expr.c, 0LL)};
    out += aff_str(pos, iter, bound) +
           (c.kind == Constraint::Kind::Eq0 ? " == " : " >= ") +
           aff_str(neg, iter, bound);
  }
  return out;
}

bool feasible(const Region& r) {
  if (r.trivially_empty()) return false;
  return feasible_constraints(r.constraints());
}

namespace {

// Feasibility of r && extra-constraints.
bool feasible_with(const Region& r, const std::vector<Constraint>& extra) {
  if (r.trivially_empty()) return false;
  std::vector<Constraint> cs = r.constraints();
  for (const auto& c : extra) {
    Constraint cc = canon(c);
    if (cc.expr.is_constant()) {
      bool ok = cc.kind == Constraint::Kind::Eq0 ? cc.expr.c == 0
                                                 : cc.expr.c >= 0;
      if (!ok) return false;
      continue;
    }
    cs.push_back(cc);
  }
  return feasible_constraints(cs);
}

// Negation of a constraint as a disjunction of >=0 constraints.
std::vector<std::vector<Constraint>> negate(const Constraint& c) {
  if (c.kind == Constraint::Kind::Ge0) {
    // !(e >= 0)  <=>  -e - 1 >= 0
    return {{ge0(aff_sub(aff_neg(c.expr), aff_const(1)))}};
  }
  // !(e == 0)  <=>  e - 1 >= 0  or  -e - 1 >= 0
  return {{ge0(aff_sub(c.expr, aff_const(1)))},
          {ge0(aff_sub(aff_neg(c.expr), aff_const(1)))}};
}

// Drops constraints implied by the remaining ones. The point set is
// unchanged; only the printed form and later decide() work shrink.
Region minimized(const Region& r) {
  std::vector<Constraint> kept = r.constraints();
  for (size_t k = 0; k < kept.size();) {
    std::vector<Constraint> others;
    for (size_t m = 0; m < kept.size(); ++m)
      if (m != k) others.push_back(kept[m]);
    bool implied = true;
    for (const auto& branch : negate(kept[k])) {
      std::vector<Constraint> test = others;
      test.insert(test.end(), branch.begin(), branch.end());
      if (feasible_constraints(test)) {
        implied = false;
        break;
      }
    }
    if (implied)
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(k));
    else
      ++k;
  }
  Region out;
  for (const auto& c : kept) out.add(c);
  return out;
}

}  // namespace

Truth decide(const Region& r, const Constraint& c) {
  Constraint cc = canon(c);
  bool can_be_false = false;
  for (const auto& branch : negate(cc))
    if (feasible_with(r, branch)) { can_be_false = true; break; }
  if (!can_be_false) return Truth::True;
  if (!feasible_with(r, {cc})) return Truth::False;
  return Truth::Unknown;
}

Truth decide(const Region& r, const Guard& g) {
  bool unknown = false;
  for (const auto& c : g) {
    switch (decide(r, c)) {
      case Truth::False: return Truth::False;
      case Truth::Unknown: unknown = true; break;
      case Truth::True: break;
    }
  }
  return unknown ? Truth::Unknown : Truth::True;
}

std::vector<Region> split_regions(const std::vector<NormClause>& clauses,
                                  const std::vector<long long>& send_distances,
                                  const LoopBounds& bounds,
                                  const std::vector<Constraint>& extra) {
  // Guard atoms, in source order, deduplicated.
  std::vector<Constraint> atoms;
  auto add_atom = [&atoms](const Constraint& c) {
    Constraint cc = canon(c);
    if (cc.expr.is_constant()) return;
    for (const auto& have : atoms)
      if (have == cc) return;
    atoms.push_back(cc);
  };
  for (const auto& cl : clauses)
    for (const auto& c : cl.guard) add_atom(c);
  for (long long d : send_distances) {
    for (const auto& c : bounds.is_iteration_at_offset(d)) add_atom(c);
    for (const auto& c : bounds.is_iteration_at_offset(-d)) add_atom(c);
  }
  if (atoms.size() > 16)
    fail(Code::Internal, "too many guard atoms to enumerate");

  Region base;
  base.add(ge0(aff_sub(AffineExpr{1, 0, 0}, bounds.lo)));
  base.add(ge0(aff_sub(aff_sub(bounds.hi, AffineExpr{1, 0, 0}),
                       aff_const(1))));
  for (const auto& c : extra) base.add(c);

  std::vector<Region> out;
  // DFS over truth assignments, true branch first, pruning infeasible
  // prefixes. Equality atoms split their negative side in two.
  struct Frame { Region region; size_t next_atom; };
  std::vector<Frame> stack;
  if (feasible(base)) stack.push_back({base, 0});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.next_atom == atoms.size()) {
      out.push_back(minimized(f.region));
      continue;
    }
    const Constraint& atom = atoms[f.next_atom];
    std::vector<Region> branches;
    {
      Region pos = f.region;
      pos.add(atom);
      branches.push_back(std::move(pos));
    }
    for (const auto& neg_branch : negate(atom)) {
      Region neg = f.region;
      for (const auto& c : neg_branch) neg.add(c);
      branches.push_back(std::move(neg));
    }
    // Reverse push so the positive branch is explored first.
    for (auto it = branches.rbegin(); it != branches.rend(); ++it)
      if (feasible(*it)) stack.push_back({std::move(*it), f.next_atom + 1});
  }
  return out;
}

}  // namespace loopver::resources
