#include "loopver/token.hpp"

#include <array>
#include <cctype>
#include <string_view>

namespace loopver::frontend {

const char* tok_kind_name(TokKind k) {
  switch (k) {
    case TokKind::Keyword: return "keyword";
    case TokKind::Ident: return "ident";
    case TokKind::IntLit: return "int";
    case TokKind::FracLit: return "fraction";
    case TokKind::Symbol: return "symbol";
    case TokKind::End: return "end";
  }
  return "?";
}

namespace {

const std::array<std::string_view, 7> kKeywords = {
    "for", "int", "const", "requires", "ensures", "send", "to"};

bool is_keyword(std::string_view s) {
  for (auto k : kKeywords)
    if (k == s) return true;
  return false;
}

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  bool in_block_annot = false;
  std::vector<Token> out;

  explicit Lexer(const std::string& s) : src(s) {}

  char cur() const { return pos < src.size() ? src[pos] : '\0'; }
  char at(size_t off) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }
  bool starts(std::string_view s) const {
    return src.compare(pos, s.size(), s) == 0;
  }
  Span here() const { return Span{line, col}; }

  void advance(size_t n = 1) {
    for (size_t k = 0; k < n && pos < src.size(); ++k, ++pos) {
      if (src[pos] == '\n') { ++line; col = 1; } else { ++col; }
    }
  }

  void skip_line_comment() {
    while (pos < src.size() && src[pos] != '\n') advance();
  }

  void skip_block_comment(Span start) {
    advance(2);
    while (pos < src.size()) {
      if (starts("*/")) { advance(2); return; }
      advance();
    }
    fail(Code::LexError, "unterminated comment", start);
  }

  void push(TokKind kind, std::string lexeme, Span sp) {
    Token t;
    t.kind = kind;
    t.lexeme = std::move(lexeme);
    t.span = sp;
    out.push_back(std::move(t));
  }

  long long lex_digits(Span sp) {
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(cur()))) {
      if (__builtin_mul_overflow(v, 10LL, &v) ||
          __builtin_add_overflow(v, static_cast<long long>(cur() - '0'), &v))
        fail(Code::LexError, "integer literal too large", sp);
      advance();
    }
    return v;
  }

  void lex_number() {
    Span sp = here();
    size_t start = pos;
    long long num = lex_digits(sp);
    // A slash right before another digit separates a fraction literal;
    // the language has no division operator.
    if (cur() == '/' && std::isdigit(static_cast<unsigned char>(at(1)))) {
      advance();
      long long den = lex_digits(sp);
      if (den == 0) fail(Code::LexError, "fraction with zero denominator", sp);
      Token t;
      t.kind = TokKind::FracLit;
      t.lexeme = src.substr(start, pos - start);
      t.span = sp;
      t.frac = resources::Fraction(num, den);
      out.push_back(std::move(t));
      return;
    }
    Token t;
    t.kind = TokKind::IntLit;
    t.lexeme = src.substr(start, pos - start);
    t.span = sp;
    t.int_value = num;
    out.push_back(std::move(t));
  }

  void lex_word() {
    Span sp = here();
    size_t start = pos;
    while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')
      advance();
    std::string word = src.substr(start, pos - start);
    TokKind kind = is_keyword(word) ? TokKind::Keyword : TokKind::Ident;
    push(kind, std::move(word), sp);
  }

  bool lex_symbol() {
    static const std::array<std::string_view, 7> two_plus = {
        "==>", "==", "<=", ">=", "**", "++", "+="};
    Span sp = here();
    for (auto s : two_plus) {
      if (starts(s)) {
        push(TokKind::Symbol, std::string(s), sp);
        advance(s.size());
        return true;
      }
    }
    if (starts("&&")) {
      push(TokKind::Symbol, "&&", sp);
      advance(2);
      return true;
    }
    static const std::string_view singles = "()[]{},;:=<>+-*";
    char c = cur();
    if (singles.find(c) != std::string_view::npos) {
      push(TokKind::Symbol, std::string(1, c), sp);
      advance();
      return true;
    }
    return false;
  }

  std::vector<Token> run() {
    while (pos < src.size()) {
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(); continue; }
      if (starts("/*@")) {
        if (in_block_annot)
          fail(Code::LexError, "nested annotation block", here());
        in_block_annot = true;
        advance(3);
        continue;
      }
      if (starts("@*/")) {
        if (!in_block_annot)
          fail(Code::LexError, "'@*/' without matching '/*@'", here());
        in_block_annot = false;
        advance(3);
        continue;
      }
      if (starts("//@")) { advance(3); continue; }
      if (starts("//")) { skip_line_comment(); continue; }
      if (starts("/*")) { skip_block_comment(here()); continue; }
      if (std::isdigit(static_cast<unsigned char>(c))) { lex_number(); continue; }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') { lex_word(); continue; }
      if (lex_symbol()) continue;
      fail(Code::LexError, std::string("unexpected character '") + c + "'", here());
    }
    if (in_block_annot)
      fail(Code::LexError, "unterminated annotation block");
    return std::move(out);
  }
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
  return Lexer(source).run();
}

}  // namespace loopver::frontend
