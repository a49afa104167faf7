#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "loopver/token.hpp"

using namespace loopver::frontend;
using loopver::Code;

namespace {
std::vector<Token> lex(const std::string& s) { return tokenize(s); }
}  // namespace

TEST_CASE("keywords and identifiers are distinguished") {
  auto ts = lex("for int const requires ensures send to perm min i N1");
  REQUIRE(ts.size() == 11);
  for (size_t k = 0; k < 7; ++k) CHECK(ts[k].kind == TokKind::Keyword);
  CHECK(ts[7].is(TokKind::Ident, "perm"));
  CHECK(ts[8].is(TokKind::Ident, "min"));
  CHECK(ts[9].is(TokKind::Ident, "i"));
  CHECK(ts[10].is(TokKind::Ident, "N1"));
}

TEST_CASE("fraction literals need adjacent digits") {
  auto ts = lex("perm(a[i], 1/2)");
  REQUIRE(ts.size() == 9);
  CHECK(ts[0].is(TokKind::Ident, "perm"));
  CHECK(ts[7].kind == TokKind::FracLit);
  CHECK(ts[7].frac.str() == "1/2");

  // Whole permissions are plain integers at the token level.
  auto whole = lex("perm(a[i], 1)");
  CHECK(whole[7].kind == TokKind::IntLit);
  CHECK(whole[7].int_value == 1);

  // Reduction happens in the literal itself.
  CHECK(lex("2/4")[0].frac.str() == "1/2");
}

TEST_CASE("multi-character symbols lex as single tokens") {
  auto ts = lex("==> == <= >= ** ++ += && < = +");
  std::vector<std::string> want = {"==>", "==", "<=", ">=", "**", "++",
                                   "+=",  "&&", "<",  "=",  "+"};
  REQUIRE(ts.size() == want.size());
  for (size_t k = 0; k < want.size(); ++k) {
    CHECK(ts[k].kind == TokKind::Symbol);
    CHECK(ts[k].lexeme == want[k]);
  }
}

TEST_CASE("annotation markers frame contract text") {
  // Annotation content is ordinary tokens; the markers themselves vanish.
  auto ts = lex("/*@ requires perm(a[i],1); @*/");
  REQUIRE(ts.size() == 11);
  CHECK(ts[0].is(TokKind::Keyword, "requires"));
  CHECK(ts[10].is(TokKind::Symbol, ";"));

  auto line = lex("//@ send perm(a[i],1/2) to S2,1;\nx");
  CHECK(line[0].is(TokKind::Keyword, "send"));
  CHECK(line.back().is(TokKind::Ident, "x"));
}

TEST_CASE("plain comments are skipped entirely") {
  auto ts = lex("a // if (i>1) receive perm(a[i-1],1/2);\nb /* block */ c");
  REQUIRE(ts.size() == 3);
  CHECK(ts[0].is(TokKind::Ident, "a"));
  CHECK(ts[1].is(TokKind::Ident, "b"));
  CHECK(ts[2].is(TokKind::Ident, "c"));
}

TEST_CASE("spans are one-based line and column") {
  auto ts = lex("ab\n  cd");
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].span.line == 1);
  CHECK(ts[0].span.col == 1);
  CHECK(ts[1].span.line == 2);
  CHECK(ts[1].span.col == 3);
}

TEST_CASE("lex errors carry positions and reasons") {
  auto d1 = diag_of([] { tokenize("a $ b"); });
  REQUIRE(d1);
  CHECK(d1->code == Code::LexError);
  CHECK(d1->message == "unexpected character '$'");
  CHECK(d1->span.col == 3);

  auto d2 = diag_of([] { tokenize("1/0"); });
  REQUIRE(d2);
  CHECK(d2->message == "fraction with zero denominator");

  auto d3 = diag_of([] { tokenize("/* never closed"); });
  REQUIRE(d3);
  CHECK(d3->message == "unterminated comment");

  auto d4 = diag_of([] { tokenize("99999999999999999999"); });
  REQUIRE(d4);
  CHECK(d4->message == "integer literal too large");

  auto d5 = diag_of([] { tokenize("/*@ /*@"); });
  REQUIRE(d5);
  CHECK(d5->message == "nested annotation block");

  auto d6 = diag_of([] { tokenize("@*/"); });
  REQUIRE(d6);
  CHECK(d6->message == "'@*/' without matching '/*@'");

  auto d7 = diag_of([] { tokenize("/*@ requires x"); });
  REQUIRE(d7);
  CHECK(d7->message == "unterminated annotation block");
}

TEST_CASE("the corpus lexes without errors") {
  for (int k = 1; k <= 3; ++k) {
    auto ts = tokenize(listing_source(k));
    CHECK(ts.size() > 40);
  }
}
