#include "loopver/parser.hpp"

namespace loopver::frontend {

namespace {

struct Parser {
  const std::vector<Token>& toks;
  size_t pos = 0;

  explicit Parser(const std::vector<Token>& t) : toks(t) {}

  const Token& peek(size_t off = 0) const {
    static const Token end_tok{};  // TokKind::End
    size_t p = pos + off;
    return p < toks.size() ? toks[p] : end_tok;
  }
  Span here() const { return peek().span; }
  bool at_end() const { return pos >= toks.size(); }

  bool at(TokKind k, const std::string& lex) const { return peek().is(k, lex); }
  bool at_kw(const std::string& kw) const { return at(TokKind::Keyword, kw); }
  bool at_sym(const std::string& s) const { return at(TokKind::Symbol, s); }

  Token take() {
    if (at_end()) fail(Code::ParseError, "unexpected end of input", here());
    return toks[pos++];
  }

  Token expect(TokKind k, const std::string& lex, const std::string& what) {
    if (!peek().is(k, lex))
      fail(Code::ParseError,
           "expected '" + lex + "' " + what + ", got '" + describe(peek()) + "'",
           here());
    return take();
  }

  Token expect_kind(TokKind k, const std::string& what) {
    if (peek().kind != k)
      fail(Code::ParseError,
           "expected " + std::string(tok_kind_name(k)) + " " + what +
               ", got '" + describe(peek()) + "'",
           here());
    return take();
  }

  static std::string describe(const Token& t) {
    return t.kind == TokKind::End ? "end of input" : t.lexeme;
  }

  // --- expressions ---

  ArithExpr parse_arith() { return parse_additive(); }

  ArithExpr parse_additive() {
    ArithExpr e = parse_mult();
    while (at_sym("+") || at_sym("-")) {
      Token op = take();
      ArithExpr rhs = parse_mult();
      ArithExpr node;
      node.kind = op.lexeme == "+" ? ArithExpr::Kind::Add : ArithExpr::Kind::Sub;
      node.span = op.span;
      node.kids.push_back(std::move(e));
      node.kids.push_back(std::move(rhs));
      e = std::move(node);
    }
    return e;
  }

  ArithExpr parse_mult() {
    ArithExpr e = parse_unary();
    while (at_sym("*")) {
      Token op = take();
      ArithExpr rhs = parse_unary();
      ArithExpr node;
      node.kind = ArithExpr::Kind::Mul;
      node.span = op.span;
      node.kids.push_back(std::move(e));
      node.kids.push_back(std::move(rhs));
      e = std::move(node);
    }
    return e;
  }

  ArithExpr parse_unary() {
    if (at_sym("-")) {
      Token op = take();
      ArithExpr inner = parse_unary();
      if (inner.kind == ArithExpr::Kind::IntLit) {
        inner.value = -inner.value;
        inner.span = op.span;
        return inner;
      }
      ArithExpr node;
      node.kind = ArithExpr::Kind::Neg;
      node.span = op.span;
      node.kids.push_back(std::move(inner));
      return node;
    }
    return parse_primary();
  }

  ArithExpr parse_primary() {
    const Token& t = peek();
    if (t.kind == TokKind::IntLit) {
      Token lit = take();
      ArithExpr e;
      e.kind = ArithExpr::Kind::IntLit;
      e.value = lit.int_value;
      e.span = lit.span;
      return e;
    }
    if (t.kind == TokKind::Ident) {
      if (t.lexeme == "min" && peek(1).is(TokKind::Symbol, "(")) {
        Token name = take();
        expect(TokKind::Symbol, "(", "after min");
        ArithExpr l = parse_arith();
        expect(TokKind::Symbol, ",", "between min arguments");
        ArithExpr r = parse_arith();
        expect(TokKind::Symbol, ")", "after min arguments");
        ArithExpr e;
        e.kind = ArithExpr::Kind::Min;
        e.span = name.span;
        e.kids.push_back(std::move(l));
        e.kids.push_back(std::move(r));
        return e;
      }
      Token name = take();
      if (at_sym("[")) {
        take();
        ArithExpr idx = parse_arith();
        expect(TokKind::Symbol, "]", "after array index");
        ArithExpr e;
        e.kind = ArithExpr::Kind::Cell;
        e.name = name.lexeme;
        e.span = name.span;
        e.kids.push_back(std::move(idx));
        return e;
      }
      ArithExpr e;
      e.kind = ArithExpr::Kind::Var;
      e.name = name.lexeme;
      e.span = name.span;
      return e;
    }
    if (at_sym("(")) {
      take();
      ArithExpr e = parse_arith();
      expect(TokKind::Symbol, ")", "to close parenthesis");
      return e;
    }
    fail(Code::ParseError, "expected expression, got '" + describe(t) + "'",
         t.span);
  }

  // --- contracts ---

  RelOp parse_rel() {
    if (at_sym("==")) { take(); return RelOp::Eq; }
    if (at_sym("<=")) { take(); return RelOp::Le; }
    if (at_sym("<")) { take(); return RelOp::Lt; }
    if (at_sym(">=")) { take(); return RelOp::Ge; }
    if (at_sym(">")) { take(); return RelOp::Gt; }
    fail(Code::ParseError, "expected comparison operator, got '" +
                               describe(peek()) + "'",
         here());
  }

  CmpExpr parse_cmp() {
    CmpExpr c;
    c.span = here();
    c.lhs = parse_arith();
    c.rel = parse_rel();
    c.rhs = parse_arith();
    return c;
  }

  bool at_perm_atom() const {
    return peek().kind == TokKind::Ident && peek().lexeme == "perm" &&
           peek(1).is(TokKind::Symbol, "(");
  }

  PermAtom parse_atom() {
    Span sp = here();
    if (!at_perm_atom())
      fail(Code::ParseError,
           "expected perm atom, got '" + describe(peek()) + "'", sp);
    take();  // perm
    expect(TokKind::Symbol, "(", "after perm");
    Token arr = expect_kind(TokKind::Ident, "as perm array");
    expect(TokKind::Symbol, "[", "after array name");
    ArithExpr idx = parse_arith();
    expect(TokKind::Symbol, "]", "after index");
    expect(TokKind::Symbol, ",", "before permission amount");
    PermAtom a;
    a.array = arr.lexeme;
    a.index = std::move(idx);
    a.span = sp;
    if (peek().kind == TokKind::FracLit) {
      a.frac = take().frac;
    } else if (peek().kind == TokKind::IntLit) {
      Token v = take();
      a.frac = resources::Fraction(v.int_value, 1);
    } else {
      fail(Code::ParseError,
           "expected permission amount, got '" + describe(peek()) + "'",
           here());
    }
    expect(TokKind::Symbol, ")", "after permission amount");
    return a;
  }

  // formula := [cmp (&& cmp)* '==>'] atom ('**' atom)*
  // A guard distributes over every atom to its right.
  std::vector<ContractClause> parse_formula() {
    BoolGuard guard;
    if (!at_perm_atom()) {
      guard.push_back(parse_cmp());
      while (at_sym("&&")) {
        take();
        guard.push_back(parse_cmp());
      }
      expect(TokKind::Symbol, "==>", "after guard");
    }
    std::vector<ContractClause> clauses;
    clauses.push_back(ContractClause{guard, parse_atom()});
    while (at_sym("**")) {
      take();
      if (!at_perm_atom() && !guard.empty())
        fail(Code::ParseError, "guard must precede all atoms in a formula",
             here());
      clauses.push_back(ContractClause{guard, parse_atom()});
    }
    return clauses;
  }

  // --- statements ---

  Statement parse_body_item() {
    if (at_kw("for"))
      fail(Code::NestingError, "nested loops are not supported", here());
    std::optional<std::string> label;
    Span sp = here();
    if (peek().kind == TokKind::Ident && peek(1).is(TokKind::Symbol, ":")) {
      label = take().lexeme;
      take();  // ':'
      if (at_kw("for"))
        fail(Code::NestingError, "nested loops are not supported", here());
    }
    if (at_kw("send")) {
      Token kw = take();
      Statement s;
      s.kind = Statement::Kind::Send;
      s.label = label;
      s.span = label ? sp : kw.span;
      s.formula = parse_formula();
      expect(TokKind::Keyword, "to", "after send formula");
      s.target_label = expect_kind(TokKind::Ident, "as send target").lexeme;
      expect(TokKind::Symbol, ",", "before send distance");
      bool neg = false;
      if (at_sym("-")) { take(); neg = true; }
      Token d = expect_kind(TokKind::IntLit, "as send distance");
      s.distance = neg ? -d.int_value : d.int_value;
      expect(TokKind::Symbol, ";", "after send");
      return s;
    }
    Token arr = expect_kind(TokKind::Ident, "as assignment target");
    expect(TokKind::Symbol, "[", "after assignment target");
    ArithExpr idx = parse_arith();
    expect(TokKind::Symbol, "]", "after index");
    expect(TokKind::Symbol, "=", "in assignment");
    ArithExpr rhs = parse_arith();
    expect(TokKind::Symbol, ";", "after assignment");
    Statement s;
    s.kind = Statement::Kind::Assign;
    s.label = label;
    s.span = label ? sp : arr.span;
    s.array = arr.lexeme;
    s.index = std::move(idx);
    s.rhs = std::move(rhs);
    return s;
  }

  // --- top level ---

  Param parse_param() {
    Span sp = here();
    bool is_const = false;
    if (at_kw("const")) { take(); is_const = true; }
    expect(TokKind::Keyword, "int", "in parameter declaration");
    Token name = expect_kind(TokKind::Ident, "as parameter name");
    Param p;
    p.name = name.lexeme;
    p.span = sp;
    if (at_sym("[")) {
      take();
      expect(TokKind::Symbol, "]", "in array declaration");
      if (is_const)
        fail(Code::ParseError, "const arrays are not supported", sp);
      p.kind = ParamKind::IntArray;
    } else {
      p.kind = is_const ? ParamKind::ConstScalar : ParamKind::IntScalar;
    }
    expect(TokKind::Symbol, ";", "after parameter declaration");
    return p;
  }

  LoopSpec parse_loop() {
    LoopSpec loop;
    loop.span = here();
    expect(TokKind::Keyword, "for", "at loop");
    expect(TokKind::Symbol, "(", "after for");
    if (at_kw("int")) take();
    Token var = expect_kind(TokKind::Ident, "as loop variable");
    loop.iter_var = var.lexeme;
    expect(TokKind::Symbol, "=", "in loop initialization");
    loop.lower = parse_arith();
    expect(TokKind::Symbol, ";", "after loop initialization");
    Token var2 = expect_kind(TokKind::Ident, "in loop condition");
    if (var2.lexeme != loop.iter_var)
      fail(Code::ParseError, "loop condition must test '" + loop.iter_var + "'",
           var2.span);
    if (at_sym("<")) {
      take();
      loop.inclusive_upper = false;
    } else if (at_sym("<=")) {
      take();
      loop.inclusive_upper = true;
    } else {
      fail(Code::ParseError, "loop condition must use '<' or '<='", here());
    }
    loop.upper = parse_arith();
    expect(TokKind::Symbol, ";", "after loop condition");
    Token var3 = expect_kind(TokKind::Ident, "in loop increment");
    if (var3.lexeme != loop.iter_var)
      fail(Code::ParseError,
           "loop increment must update '" + loop.iter_var + "'", var3.span);
    if (at_sym("++")) {
      take();
    } else if (at_sym("+=")) {
      take();
      Token step = expect_kind(TokKind::IntLit, "as loop stride");
      if (step.int_value != 1)
        fail(Code::ParseError, "only unit stride is supported", step.span);
    } else {
      fail(Code::ParseError, "loop increment must be '++' or '+= 1'", here());
    }
    expect(TokKind::Symbol, ")", "after loop header");

    while (at_kw("requires") || at_kw("ensures")) {
      bool is_req = peek().lexeme == "requires";
      take();
      auto clauses = parse_formula();
      expect(TokKind::Symbol, ";", "after contract clause");
      auto& dst = is_req ? loop.requires_clauses : loop.ensures_clauses;
      for (auto& c : clauses) dst.push_back(std::move(c));
    }

    expect(TokKind::Symbol, "{", "at loop body");
    while (!at_sym("}")) {
      if (at_end())
        fail(Code::ParseError, "unterminated loop body", here());
      loop.body.push_back(parse_body_item());
    }
    take();  // '}'
    return loop;
  }

  Program run() {
    Program prog;
    while (at_kw("int") || at_kw("const")) prog.params.push_back(parse_param());
    prog.loop = parse_loop();
    if (!at_end())
      fail(Code::ParseError,
           "unexpected trailing input '" + describe(peek()) + "'", here());
    return prog;
  }
};

}  // namespace

Program parse_program(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

Program parse(const std::string& source) {
  return parse_program(tokenize(source));
}

// --- structural equality (span-insensitive) ---

bool struct_eq(const ArithExpr& a, const ArithExpr& b) {
  if (a.kind != b.kind || a.value != b.value || a.name != b.name ||
      a.kids.size() != b.kids.size())
    return false;
  for (size_t k = 0; k < a.kids.size(); ++k)
    if (!struct_eq(a.kids[k], b.kids[k])) return false;
  return true;
}

namespace {

bool eq_guard(const BoolGuard& a, const BoolGuard& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k].rel != b[k].rel || !struct_eq(a[k].lhs, b[k].lhs) ||
        !struct_eq(a[k].rhs, b[k].rhs))
      return false;
  }
  return true;
}

bool eq_clauses(const std::vector<ContractClause>& a,
                const std::vector<ContractClause>& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k) {
    if (!eq_guard(a[k].guard, b[k].guard)) return false;
    if (a[k].atom.array != b[k].atom.array ||
        !(a[k].atom.frac == b[k].atom.frac) ||
        !struct_eq(a[k].atom.index, b[k].atom.index))
      return false;
  }
  return true;
}

}  // namespace

bool struct_eq(const Program& a, const Program& b) {
  if (a.params.size() != b.params.size()) return false;
  for (size_t k = 0; k < a.params.size(); ++k)
    if (a.params[k].name != b.params[k].name ||
        a.params[k].kind != b.params[k].kind)
      return false;
  const LoopSpec& x = a.loop;
  const LoopSpec& y = b.loop;
  if (x.iter_var != y.iter_var || x.inclusive_upper != y.inclusive_upper ||
      !struct_eq(x.lower, y.lower) || !struct_eq(x.upper, y.upper))
    return false;
  if (!eq_clauses(x.requires_clauses, y.requires_clauses) ||
      !eq_clauses(x.ensures_clauses, y.ensures_clauses))
    return false;
  if (x.body.size() != y.body.size()) return false;
  for (size_t k = 0; k < x.body.size(); ++k) {
    const Statement& s = x.body[k];
    const Statement& t = y.body[k];
    if (s.kind != t.kind || s.label != t.label) return false;
    if (s.kind == Statement::Kind::Assign) {
      if (s.array != t.array || !struct_eq(s.index, t.index) ||
          !struct_eq(s.rhs, t.rhs))
        return false;
    } else {
      if (s.target_label != t.target_label || s.distance != t.distance ||
          !eq_clauses(s.formula, t.formula))
        return false;
    }
  }
  return true;
}

}  // namespace loopver::frontend
