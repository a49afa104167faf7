#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "loopver/body_checker.hpp"

using namespace loopver::checker;
using loopver::Code;
using loopver::frontend::load_program;
using loopver::frontend::ValidatedProgram;
using loopver::resources::AffineExpr;
using loopver::resources::eq0;
using loopver::resources::Fraction;
using loopver::resources::ge0;
using loopver::resources::Region;

namespace {
std::string region_str(const RegionResult& r) { return r.region.str("i", "N"); }
}  // namespace

TEST_CASE("a loop without transfers checks in one region") {
  auto vp = load_program(listing_source(1));
  CheckReport rep = check_iteration(vp);
  CHECK(rep.pass);
  CHECK(rep.sends_used.empty());
  REQUIRE(rep.regions.size() == 1);
  CHECK(region_str(rep.regions[0]) == "i >= 0 && N >= i+1");
  CHECK(rep.regions[0].pass);

  // Trace: read b[i], write a[i], read a[i], write c[i].
  const auto& t = rep.regions[0].trace;
  REQUIRE(t.size() == 4);
  CHECK(t[0].stmt == "S1");
  CHECK(t[0].action == Action::Read);
  CHECK(t[0].cell.array == "b");
  CHECK(t[0].before == Fraction(1, 2));
  CHECK(t[1].action == Action::Write);
  CHECK(t[1].cell.array == "a");
  CHECK(t[1].before.is_one());
  CHECK(t[2].stmt == "S2");
  CHECK(t[2].action == Action::Read);
  CHECK(t[3].action == Action::Write);
  CHECK(t[3].cell.array == "c");
}

TEST_CASE("forward transfer splits into boundary regions and passes") {
  auto vp = load_program(listing_source(2));
  CheckReport rep = check_iteration(vp);
  CHECK(rep.pass);
  REQUIRE(rep.regions.size() == 4);
  std::vector<std::string> names;
  for (const auto& r : rep.regions) {
    CHECK(r.pass);
    names.push_back(region_str(r));
  }
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{
                     "i == 1 && N >= i+1", "i == 1 && i == N",
                     "i >= 2 && N >= i+1", "i >= 2 && i == N"});

  REQUIRE(rep.sends_used.size() == 1);
  CHECK(rep.sends_used[0].site == 1);
  CHECK_FALSE(rep.sends_used[0].label.has_value());
  CHECK(rep.sends_used[0].target == "S2");
  CHECK(rep.sends_used[0].distance == 1);
  CHECK(rep.sends_used[0].direction == Direction::Forward);
}

TEST_CASE("the interior region replays send and receive exactly") {
  auto vp = load_program(listing_source(2));
  CheckReport rep = check_iteration(vp);
  const RegionResult* interior = nullptr;
  for (const auto& r : rep.regions)
    if (region_str(r) == "i >= 2 && N >= i+1") interior = &r;
  REQUIRE(interior);

  // S1 reads c[i], a[i]; writes a[i]; the send halves a[i]; the receive
  // restores a[i-1] before S2 touches it.
  const auto& t = interior->trace;
  REQUIRE(t.size() == 8);
  CHECK(t[2].action == Action::Write);
  CHECK(t[3].stmt == "stmt1");  // the send is unlabeled
  CHECK(t[3].action == Action::Send);
  CHECK(t[3].before.is_one());
  CHECK(t[3].after == Fraction(1, 2));
  CHECK(t[4].stmt == "S2");
  CHECK(t[4].action == Action::Receive);
  CHECK(t[4].cell.array == "a");
  CHECK(t[4].cell.index == AffineExpr{1, 0, -1});
  CHECK(t[4].before.is_zero());
  CHECK(t[4].after == Fraction(1, 2));
  CHECK(t[5].action == Action::Read);
  CHECK(t[7].action == Action::Write);
}

TEST_CASE("backward transfer also verifies") {
  auto vp = load_program(listing_source(3));
  CheckReport rep = check_iteration(vp);
  CHECK(rep.pass);
  CHECK(rep.regions.size() == 4);
  REQUIRE(rep.sends_used.size() == 1);
  CHECK(rep.sends_used[0].target == "S1");
  CHECK(rep.sends_used[0].direction == Direction::Backward);
}

TEST_CASE("receive points are the send formulas shifted back") {
  auto vp = load_program(listing_source(2));
  auto rps = receive_points(vp);
  REQUIRE(rps.size() == 1);
  REQUIRE(rps.count("S2") == 1);
  REQUIRE(rps["S2"].size() == 1);
  const ReceivePoint& rp = rps["S2"][0];
  CHECK(rp.send_site == 1);
  REQUIRE(rp.formula.size() == 1);
  CHECK(rp.formula[0].atom.cell.array == "a");
  CHECK(rp.formula[0].atom.cell.index == AffineExpr{1, 0, -1});
  CHECK(rp.formula[0].atom.frac == Fraction(1, 2));
  // existence = is_iteration(i-1): 1 <= i-1 && i-1 < N+1.
  REQUIRE(rp.existence.size() == 2);
  for (long long n = 1; n <= 4; ++n)
    for (long long i = 1; i <= n; ++i)
      CHECK(loopver::resources::guard_holds(rp.existence, i, n) == (i >= 2));
}

TEST_CASE("deleting the send starves the consumer") {
  auto vp = load_program(mutant_send_deleted());
  CheckReport rep = check_iteration(vp);
  CHECK_FALSE(rep.pass);

  // i == 1 && i == N keeps its full permission and satisfies the ensures;
  // the other boundary region ends with too much and mismatches; every
  // interior region starves at the receive-less read.
  for (const auto& r : rep.regions) {
    std::string name = region_str(r);
    if (name == "i == 1 && i == N") {
      CHECK(r.pass);
    } else if (name == "i == 1 && N >= i+1") {
      REQUIRE(r.diag);
      CHECK(r.diag->code == Code::PostconditionMismatch);
    } else {
      REQUIRE(r.diag);
      CHECK(r.diag->code == Code::InsufficientRead);
    }
  }

  // The mismatch region comes first, but access faults outrank it.
  REQUIRE(rep.primary);
  CHECK(rep.primary->code == Code::InsufficientRead);
  CHECK(rep.primary->message == "no read permission on a[i-1] at S2");
}

TEST_CASE("a zero distance is rejected before any region work") {
  auto vp = load_program(mutant_zero_distance());
  CheckReport rep = check_iteration(vp);
  CHECK_FALSE(rep.pass);
  CHECK(rep.regions.empty());
  REQUIRE(rep.primary);
  CHECK(rep.primary->code == Code::NonPositiveDistance);
  CHECK(rep.primary->message == "send distance must be at least 1, got 0");
}

TEST_CASE("an over-allocating contract is caught while normalizing") {
  auto vp = load_program(mutant_doubled_atom());
  CheckReport rep = check_iteration(vp);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.primary);
  CHECK(rep.primary->code == Code::CapExceeded);
  CHECK(rep.primary->message ==
        "permission on a[i] sums to 2/1 which exceeds 1");
}

TEST_CASE("writing under a partial permission is rejected") {
  auto vp = load_program(replace_once(listing_source(1),
                                      "S1: a[i] = b[i] + 1;",
                                      "S1: b[i] = a[i] + 1;"));
  CheckReport rep = check_iteration(vp);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.primary);
  CHECK(rep.primary->code == Code::InsufficientWrite);
  CHECK(rep.primary->message ==
        "write to b[i] at S1 holds 1/2 instead of 1");
}

TEST_CASE("unbalanced ensures surfaces as a postcondition mismatch") {
  auto vp = load_program(replace_once(
      listing_source(1),
      "ensures  perm(a[i],1) ** perm(c[i],1) ** perm(b[i],1/2);",
      "ensures  perm(a[i],1) ** perm(c[i],1);"));
  CheckReport rep = check_iteration(vp);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.primary);
  CHECK(rep.primary->code == Code::PostconditionMismatch);
  CHECK(rep.primary->message.find("leftover 1/2 of b[i]") !=
        std::string::npos);
}

TEST_CASE("apply_send splits an undecided existence condition") {
  auto vp = load_program(listing_source(2));
  const auto& send = vp.body[vp.send_sites[0]];

  SymbolicState st;
  st.region.add(ge0(AffineExpr{1, 0, -1}));   // i >= 1
  st.region.add(ge0(AffineExpr{-1, 1, 0}));   // i <= N
  st.perms.add(loopver::resources::Cell{"a", AffineExpr{1, 0, 0}},
               Fraction::one(), st.region);

  auto out = apply_send(st, send, vp.bounds);
  REQUIRE(out.size() == 2);
  int halved = 0, kept = 0;
  for (const auto& s : out) {
    Fraction f = s.perms.fraction_at(
        loopver::resources::Cell{"a", AffineExpr{1, 0, 0}}, s.region);
    if (f == Fraction(1, 2)) ++halved;
    if (f.is_one()) ++kept;
  }
  CHECK(halved == 1);
  CHECK(kept == 1);
}

TEST_CASE("apply_send reports missing permission") {
  auto vp = load_program(listing_source(2));
  const auto& send = vp.body[vp.send_sites[0]];
  SymbolicState st;
  st.region.add(ge0(AffineExpr{1, 0, -1}));
  st.region.add(ge0(AffineExpr{-1, 1, -1}));  // i <= N-1: send fires
  auto d = diag_of([&] { apply_send(st, send, vp.bounds); });
  REQUIRE(d);
  CHECK(d->code == Code::SendWithoutPermission);
}

TEST_CASE("frame clauses pass through untouched") {
  std::string framed = replace_once(
      replace_once(listing_source(2), "int c[];", "int c[];\nint z[];"),
      "requires perm(c[i],1)", "requires perm(z[i],1/2);\nrequires perm(c[i],1)");
  framed = replace_once(framed, "ensures  perm(c[i],1)",
                        "ensures perm(z[i],1/2);\nensures  perm(c[i],1)");
  auto vp = load_program(framed);
  CheckReport rep = check_iteration(vp);
  CHECK(rep.pass);
  CHECK(rep.regions.size() == 4);
}

TEST_CASE("reports are deterministic") {
  auto vp = load_program(listing_source(2));
  CheckReport a = check_iteration(vp);
  CheckReport b = check_iteration(vp);
  REQUIRE(a.regions.size() == b.regions.size());
  for (size_t k = 0; k < a.regions.size(); ++k) {
    CHECK(region_str(a.regions[k]) == region_str(b.regions[k]));
    CHECK(a.regions[k].trace.size() == b.regions[k].trace.size());
  }
}

TEST_CASE("statement names fall back to body position") {
  auto vp = load_program(listing_source(2));
  CHECK(stmt_name(vp, 0) == "S1");
  CHECK(stmt_name(vp, 1) == "stmt1");
  CHECK(stmt_name(vp, 2) == "S2");
}
