#include "doctest.h"
#include "helpers.hpp"
#include "loopver/validate.hpp"

using namespace loopver::frontend;
using loopver::Code;
using loopver::resources::AffineExpr;

TEST_CASE("validated corpus programs expose normalized structure") {
  ValidatedProgram v1 = load_program(listing_source(1));
  CHECK(v1.iter_var == "i");
  CHECK(v1.bound_param == "N");
  CHECK(v1.bounds.lo == AffineExpr{0, 0, 0});
  CHECK(v1.bounds.hi == AffineExpr{0, 1, 0});
  CHECK(v1.pre.size() == 3);
  CHECK(v1.post.size() == 3);
  CHECK(v1.send_sites.empty());
  CHECK(v1.labels.at("S1") == 0);
  CHECK(v1.labels.at("S2") == 1);
  REQUIRE(v1.body.size() == 2);
  CHECK(v1.body[0].write.array == "a");
  CHECK(v1.body[0].write.index == AffineExpr{1, 0, 0});
  REQUIRE(v1.body[0].reads.size() == 1);
  CHECK(v1.body[0].reads[0].array == "b");

  // The inclusive upper bound becomes half-open: i <= N reads as i < N+1.
  ValidatedProgram v2 = load_program(listing_source(2));
  CHECK(v2.bounds.lo == AffineExpr{0, 0, 1});
  CHECK(v2.bounds.hi == AffineExpr{0, 1, 1});
  REQUIRE(v2.send_sites.size() == 1);
  CHECK(v2.send_sites[0] == 1);
  const BodyItem& send = v2.body[1];
  CHECK(send.kind == BodyItem::Kind::Send);
  CHECK(send.target == "S2");
  CHECK(send.target_index == 2);
  CHECK(send.distance == 1);
  CHECK(send.send_ordinal == 0);
  REQUIRE(send.formula.size() == 1);
  CHECK(send.formula[0].atom.cell.array == "a");
  CHECK(send.formula[0].atom.cell.index == AffineExpr{1, 0, 0});
  CHECK(send.formula[0].atom.frac.str() == "1/2");

  // Guarded clause: i==1 normalizes to an equality constraint.
  REQUIRE(v2.pre.size() == 3);
  REQUIRE(v2.pre[0].guard.size() == 1);
  CHECK(v2.pre[0].guard[0].kind ==
        loopver::resources::Constraint::Kind::Eq0);
  CHECK(v2.pre[0].atom.cell.index == AffineExpr{1, 0, -1});

  // S1's self-read a[i] is collected once even though it appears once per
  // product term.
  ValidatedProgram v3 = load_program(listing_source(3));
  REQUIRE(v3.body[0].reads.size() == 2);
  CHECK(v3.body[0].reads[0].array == "c");
  CHECK(v3.body[0].reads[1].array == "a");
}

TEST_CASE("duplicate reads collapse to one cell") {
  ValidatedProgram vp = load_program(
      "int N; int a[]; int b[];\n"
      "for (i = 0; i < N; i++)\n"
      "/*@ requires perm(a[i],1) ** perm(b[i],1/2);\n"
      "    ensures perm(a[i],1) ** perm(b[i],1/2); @*/\n"
      "{ S1: a[i] = b[i] + b[i] * b[i]; }");
  CHECK(vp.body[0].reads.size() == 1);
}

TEST_CASE("constant-bound loops have no bound parameter") {
  ValidatedProgram vp = load_program(
      "int a[];\n"
      "for (i = 0; i < 4; i++)\n"
      "/*@ requires perm(a[i],1); ensures perm(a[i],1); @*/\n"
      "{ S1: a[i] = a[i]; }");
  CHECK(vp.bound_param.empty());
  CHECK(vp.bounds.hi == AffineExpr{0, 0, 4});
}

namespace {
// Minimal program with one hole for the error-case table below.
std::string with_body(const std::string& body) {
  return "int N; const int CONST; int a[]; int b[];\n"
         "for (i = 0; i < N; i++)\n"
         "/*@ requires perm(a[i],1) ** perm(b[i],1/2);\n"
         "    ensures perm(a[i],1) ** perm(b[i],1/2); @*/\n"
         "{ " + body + " }";
}
}  // namespace

TEST_CASE("name and kind errors are caught during validation") {
  auto undeclared = diag_of([] { load_program(with_body("S1: z[i] = 0;")); });
  REQUIRE(undeclared);
  CHECK(undeclared->code == Code::UnknownIdentifier);
  CHECK(undeclared->message == "'z' is not declared");

  auto scalar_as_array =
      diag_of([] { load_program(with_body("S1: N[i] = 0;")); });
  REQUIRE(scalar_as_array);
  CHECK(scalar_as_array->code == Code::KindMismatch);
  CHECK(scalar_as_array->message == "'N' is not an array");

  auto array_as_scalar =
      diag_of([] { load_program(with_body("S1: a[i] = b;")); });
  REQUIRE(array_as_scalar);
  CHECK(array_as_scalar->code == Code::KindMismatch);
  CHECK(array_as_scalar->message == "array 'b' used as a scalar");

  auto dup = diag_of([] {
    load_program("int N; int N;\nfor (i = 0; i < N; i++) { S1: N[i] = 0; }");
  });
  REQUIRE(dup);
  CHECK(dup->code == Code::DuplicateParam);
  CHECK(dup->message == "parameter 'N' redeclared");

  auto shadow = diag_of([] {
    load_program("int N; int i;\nfor (i = 0; i < N; i++) { }");
  });
  REQUIRE(shadow);
  CHECK(shadow->code == Code::DuplicateParam);
  CHECK(shadow->message == "iteration variable 'i' shadows a parameter");

  auto relabel = diag_of([] {
    load_program(with_body("S1: a[i] = 0; S1: b[i] = 0;"));
  });
  REQUIRE(relabel);
  CHECK(relabel->code == Code::DuplicateLabel);
}

TEST_CASE("affine restrictions are enforced where they matter") {
  auto quad = diag_of([] { load_program(with_body("S1: a[i*i] = 0;")); });
  REQUIRE(quad);
  CHECK(quad->code == Code::NonAffineIndex);
  CHECK(quad->message == "index is not affine");

  // Value expressions may be arbitrary arithmetic; only indexes are affine.
  CHECK_NOTHROW(load_program(with_body("S1: a[i] = b[i] * b[i];")));

  auto guard = diag_of([] {
    load_program(
        "int N; int a[];\n"
        "for (i = 0; i < N; i++)\n"
        "/*@ requires i*i==0 ==> perm(a[i],1); ensures perm(a[i],1); @*/\n"
        "{ S1: a[i] = 0; }");
  });
  REQUIRE(guard);
  CHECK(guard->code == Code::NonAffineGuard);

  auto bound = diag_of([] {
    load_program("int N; int a[]; for (i = 0; i < N*N; i++) { }");
  });
  REQUIRE(bound);
  CHECK(bound->code == Code::InvalidBound);

  auto two_params = diag_of([] {
    load_program("int N; int M; int a[]; for (i = M; i < N; i++) { }");
  });
  REQUIRE(two_params);
  CHECK(two_params->code == Code::InvalidBound);
  CHECK(two_params->message ==
        "loop bounds use more than one parameter ('M' and 'N')");

  auto array_bound = diag_of([] {
    load_program("int N; int a[]; for (i = 0; i < a; i++) { }");
  });
  REQUIRE(array_bound);
  CHECK(array_bound->code == Code::InvalidBound);
}

TEST_CASE("send statements are validated against labels and formulas") {
  auto unknown = diag_of([] {
    load_program(with_body("S1: a[i] = 0; //@ send perm(a[i],1/2) to S9,1;\n"));
  });
  REQUIRE(unknown);
  CHECK(unknown->code == Code::UnknownSendTarget);
  CHECK(unknown->message == "send targets unknown label 'S9'");

  auto guarded = diag_of([] {
    load_program(with_body(
        "S1: a[i] = 0; //@ send i==0 ==> perm(a[i],1/2) to S1,1;\n"));
  });
  REQUIRE(guarded);
  CHECK(guarded->code == Code::UnsupportedSendFormula);
  CHECK(guarded->message == "send formulas must be unguarded permission atoms");

  // Backward targets are legal; direction is the classifier's business.
  CHECK_NOTHROW(load_program(
      with_body("S1: a[i] = 0; //@ send perm(a[i],1/2) to S1,1;\n")));
}

TEST_CASE("fractions outside (0,1] are rejected in contracts") {
  auto zero = diag_of([] {
    load_program(
        "int N; int a[];\n"
        "for (i = 0; i < N; i++)\n"
        "/*@ requires perm(a[i],0/2); @*/\n{ S1: a[i] = 0; }");
  });
  REQUIRE(zero);
  CHECK(zero->code == Code::InvalidFraction);

  auto over = diag_of([] {
    load_program(
        "int N; int a[];\n"
        "for (i = 0; i < N; i++)\n"
        "/*@ requires perm(a[i],3/2); @*/\n{ S1: a[i] = 0; }");
  });
  REQUIRE(over);
  CHECK(over->code == Code::InvalidFraction);
  CHECK(over->message == "permission amount 3/2 is outside (0,1]");
}
