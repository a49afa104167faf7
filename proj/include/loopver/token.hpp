#pragma once

#include <string>
#include <vector>

#include "loopver/diag.hpp"
#include "loopver/fraction.hpp"

namespace loopver::frontend {

enum class TokKind { Keyword, Ident, IntLit, FracLit, Symbol, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string lexeme;
  Span span;
  long long int_value = 0;            // IntLit
  resources::Fraction frac;           // FracLit

  bool is(TokKind k, const std::string& lex) const {
    return kind == k && lexeme == lex;
  }
};

const char* tok_kind_name(TokKind k);

// Annotation markers /*@ @*/ and //@ delimit contract text; their contents
// are lexed like ordinary source. Plain comments are skipped, which is how
// the informational "receive" comments in the input corpus get discarded.
std::vector<Token> tokenize(const std::string& source);

}  // namespace loopver::frontend
