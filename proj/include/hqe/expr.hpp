#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/field.hpp"
#include "hqe/literal.hpp"
#include "hqe/poly.hpp"

namespace hqe {

// ---------------------------------------------------------------------------
// Lexer shared by the literal, expression and formula parsers.

struct Token {
  enum class Kind : std::uint8_t { kInt, kIdent, kSym, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) {
    std::size_t i = 0;
    while (i < src.size()) {
      char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      t.pos = i;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Token::Kind::kInt;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) t.text += src[i++];
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::kIdent;
        while (i < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '\''))
          t.text += src[i++];
      } else {
        t.kind = Token::Kind::kSym;
        static const char* two[] = {"->", "<=", ">=", "!="};
        bool matched = false;
        for (const char* s : two) {
          if (src.compare(i, 2, s) == 0) {
            t.text = s;
            i += 2;
            matched = true;
            break;
          }
        }
        if (!matched) {
          if (std::string("+-*/^()[]{},.:;=<>!&|").find(c) == std::string::npos)
            throw SyntaxError(std::string("unexpected character '") + c + "'", i);
          t.text = std::string(1, c);
          ++i;
        }
      }
      toks_.push_back(std::move(t));
    }
    Token end;
    end.pos = src.size();
    toks_.push_back(end);
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  bool is_sym(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::kSym && peek(k).text == s;
  }
  bool is_ident(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::kIdent && peek(k).text == s;
  }
  bool accept(const std::string& s) {
    if (is_sym(s) || is_ident(s)) {
      next();
      return true;
    }
    return false;
  }
  void expect(const std::string& s) {
    if (!accept(s)) fail("expected '" + s + "'");
  }
  std::int64_t expect_int() {
    bool neg = accept("-");
    if (peek().kind != Token::Kind::kInt) fail("expected integer");
    std::int64_t v = std::stoll(next().text);
    return neg ? -v : v;
  }
  std::string expect_ident() {
    if (peek().kind != Token::Kind::kIdent) fail("expected identifier");
    return next().text;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what + (at_end() ? " at end of input" : " near '" + peek().text + "'"), peek().pos);
  }

  std::size_t mark() const { return i_; }
  void reset(std::size_t m) { i_ = m; }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Field-sorted terms: polynomials in named variables over K.

struct FieldExpr;
using ExprPtr = std::shared_ptr<const FieldExpr>;

struct FieldExpr {
  enum class Op : std::uint8_t { kConst, kT, kBigO, kVar, kAdd, kSub, kMul, kDiv, kNeg, kPow };
  Op op = Op::kConst;
  FieldElem value;           // kConst
  std::string name;          // kVar
  std::int64_t exponent = 0; // kPow, kBigO
  std::vector<ExprPtr> args;

  static ExprPtr constant(const FieldElem& v) {
    auto e = std::make_shared<FieldExpr>();
    e->value = v;
    return e;
  }
  static ExprPtr var(const std::string& n) {
    auto e = std::make_shared<FieldExpr>();
    e->op = Op::kVar;
    e->name = n;
    return e;
  }
  static ExprPtr node(Op op, std::vector<ExprPtr> args, std::int64_t exponent = 0) {
    auto e = std::make_shared<FieldExpr>();
    e->op = op;
    e->args = std::move(args);
    e->exponent = exponent;
    return e;
  }
};

inline void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
  if (e->op == FieldExpr::Op::kVar) out.insert(e->name);
  for (const auto& a : e->args) collect_vars(a, out);
}
inline std::set<std::string> vars_of(const ExprPtr& e) {
  std::set<std::string> s;
  collect_vars(e, s);
  return s;
}

/// Parses a field expression. `is_var` decides which identifiers are field
/// variables; any other identifier is a syntax error.
class ExprParser {
 public:
  template <class IsVar>
  ExprParser(Lexer& lx, const Field& f, IsVar is_var) : lx_(lx), f_(f), is_var_(std::move(is_var)) {}

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (lx_.is_sym("+") || lx_.is_sym("-")) {
      bool plus = lx_.next().text == "+";
      ExprPtr rhs = parse_term();
      lhs = FieldExpr::node(plus ? FieldExpr::Op::kAdd : FieldExpr::Op::kSub, {lhs, rhs});
    }
    return lhs;
  }

 private:
  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (lx_.is_sym("*") || lx_.is_sym("/")) {
      bool mul = lx_.next().text == "*";
      ExprPtr rhs = parse_unary();
      if (!mul && !vars_of(rhs).empty()) lx_.fail("division by a non-constant");
      lhs = FieldExpr::node(mul ? FieldExpr::Op::kMul : FieldExpr::Op::kDiv, {lhs, rhs});
    }
    return lhs;
  }
  ExprPtr parse_unary() {
    if (lx_.accept("-")) return FieldExpr::node(FieldExpr::Op::kNeg, {parse_unary()});
    return parse_power();
  }
  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (lx_.accept("^")) {
      std::int64_t k = lx_.expect_int();
      if (k < 0 && !vars_of(base).empty()) lx_.fail("negative power of a variable");
      return FieldExpr::node(FieldExpr::Op::kPow, {base}, k);
    }
    return base;
  }
  ExprPtr parse_atom() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::kInt) {
      return FieldExpr::constant(FieldElem::from_rational(f_, mpq_class(mpz_class(lx_.next().text))));
    }
    if (lx_.accept("(")) {
      ExprPtr e = parse_expr();
      lx_.expect(")");
      return e;
    }
    if (t.kind == Token::Kind::kIdent) {
      if (t.text == "t") {
        if (f_.is_padic()) lx_.fail("the series variable t is not available in a p-adic field");
        lx_.next();
        return FieldExpr::node(FieldExpr::Op::kT, {});
      }
      if (t.text == "O" && lx_.is_sym("(", 1)) {
        lx_.next();
        lx_.next();
        if (f_.is_padic()) {
          std::int64_t p = lx_.expect_int();
          if (p != f_.p) lx_.fail("O(p^n) with the wrong prime");
        } else {
          lx_.expect("t");
        }
        lx_.expect("^");
        std::int64_t n = lx_.expect_int();
        lx_.expect(")");
        auto big_o = std::make_shared<FieldExpr>();
        big_o->op = FieldExpr::Op::kBigO;
        big_o->exponent = n;
        big_o->value = FieldElem::zero(f_);
        return big_o;
      }
      if (is_var_(t.text)) return FieldExpr::var(lx_.next().text);
    }
    lx_.fail("expected a field term");
  }

  Lexer& lx_;
  Field f_;
  std::function<bool(const std::string&)> is_var_;
};

/// Evaluates an expression with every variable bound in env.
inline FieldElem eval_expr(const ExprPtr& e, const Field& f, const std::map<std::string, FieldElem>& env) {
  using Op = FieldExpr::Op;
  switch (e->op) {
    case Op::kConst: return e->value;
    case Op::kT: return FieldElem::uniformizer(f);
    case Op::kBigO: return FieldElem::series(f, 0, {}, e->exponent);
    case Op::kVar: {
      auto it = env.find(e->name);
      if (it == env.end()) throw PreconditionViolated("unbound field variable " + e->name);
      return it->second;
    }
    case Op::kAdd: return eval_expr(e->args[0], f, env) + eval_expr(e->args[1], f, env);
    case Op::kSub: return eval_expr(e->args[0], f, env) - eval_expr(e->args[1], f, env);
    case Op::kMul: return eval_expr(e->args[0], f, env) * eval_expr(e->args[1], f, env);
    case Op::kDiv: return eval_expr(e->args[0], f, env) / eval_expr(e->args[1], f, env);
    case Op::kNeg: return -eval_expr(e->args[0], f, env);
    case Op::kPow: return eval_expr(e->args[0], f, env).pow(e->exponent);
  }
  return FieldElem::zero(f);
}

/// The expression as a polynomial in `var`, other variables bound from env.
inline Poly expr_to_poly(const ExprPtr& e, const std::string& var, const Field& f,
                         const std::map<std::string, FieldElem>& env) {
  using Op = FieldExpr::Op;
  if (e->op == Op::kVar && e->name == var) return Poly::monomial(f, 1);
  if (!vars_of(e).contains(var)) {
    FieldElem c = eval_expr(e, f, env);
    // keep O(.) information of a constant that vanishes to its precision
    if (c.is_zero()) return Poly(f);
    return Poly::constant(c);
  }
  switch (e->op) {
    case Op::kAdd: return expr_to_poly(e->args[0], var, f, env) + expr_to_poly(e->args[1], var, f, env);
    case Op::kSub: return expr_to_poly(e->args[0], var, f, env) - expr_to_poly(e->args[1], var, f, env);
    case Op::kMul: return expr_to_poly(e->args[0], var, f, env) * expr_to_poly(e->args[1], var, f, env);
    case Op::kDiv:
      return eval_expr(e->args[1], f, env).inverse() * expr_to_poly(e->args[0], var, f, env);
    case Op::kNeg: return -expr_to_poly(e->args[0], var, f, env);
    case Op::kPow: return expr_to_poly(e->args[0], var, f, env).pow(e->exponent);
    default: break;
  }
  throw std::logic_error("expr_to_poly: unexpected node");
}

/// Builds sum a_i var^i from a polynomial.
inline ExprPtr poly_to_expr(const Poly& p, const std::string& var) {
  using Op = FieldExpr::Op;
  ExprPtr acc;
  for (std::int64_t i = p.degree(); i >= 0; --i) {
    const FieldElem& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (c.is_exact_zero()) continue;
    ExprPtr term;
    if (i == 0) {
      term = FieldExpr::constant(c);
    } else {
      ExprPtr xv = FieldExpr::var(var);
      if (i > 1) xv = FieldExpr::node(Op::kPow, {xv}, i);
      term = (c.is_exact() && c == FieldElem::one(c.field())) ? xv
                                                              : FieldExpr::node(Op::kMul, {FieldExpr::constant(c), xv});
    }
    acc = acc ? FieldExpr::node(Op::kAdd, {acc, term}) : term;
  }
  return acc ? acc : FieldExpr::constant(FieldElem::zero(p.field()));
}

namespace detail {
inline int expr_prec(const ExprPtr& e) {
  using Op = FieldExpr::Op;
  switch (e->op) {
    case Op::kAdd:
    case Op::kSub: return 1;
    case Op::kMul:
    case Op::kDiv: return 2;
    case Op::kNeg: return 3;
    case Op::kPow: return 4;
    case Op::kConst: {
      std::string s = format(e->value);
      if (s.find(' ') != std::string::npos) return 1;
      if (s[0] == '-') return 3;
      if (s.find('/') != std::string::npos || s.find('*') != std::string::npos) return 2;
      return 5;
    }
    default: return 5;
  }
}
}  // namespace detail

inline std::string print_expr(const ExprPtr& e) {
  using Op = FieldExpr::Op;
  auto wrap = [](const ExprPtr& c, int need) {
    std::string s = print_expr(c);
    return detail::expr_prec(c) < need ? "(" + s + ")" : s;
  };
  switch (e->op) {
    case Op::kConst: return format(e->value);
    case Op::kT: return "t";
    case Op::kBigO: {
      const Field& f = e->value.field();
      if (f.is_padic()) return "O(" + std::to_string(f.p) + "^" + std::to_string(e->exponent) + ")";
      return "O(t^" + std::to_string(e->exponent) + ")";
    }
    case Op::kVar: return e->name;
    case Op::kAdd: return wrap(e->args[0], 1) + " + " + wrap(e->args[1], 1);
    case Op::kSub: return wrap(e->args[0], 1) + " - " + wrap(e->args[1], 2);
    case Op::kMul: return wrap(e->args[0], 2) + "*" + wrap(e->args[1], 3);
    case Op::kDiv: return wrap(e->args[0], 2) + "/" + wrap(e->args[1], 4);
    case Op::kNeg: return "-" + wrap(e->args[0], 3);
    case Op::kPow: return wrap(e->args[0], 5) + "^" + std::to_string(e->exponent);
  }
  return "?";
}

/// Parses a constant field expression (no variables), e.g. "1 + 1/2*t^1 + O(t^5)".
inline FieldElem parse_literal(const Field& f, const std::string& text) {
  Lexer lx(text);
  ExprParser p(lx, f, [](const std::string&) { return false; });
  ExprPtr e = p.parse_expr();
  if (!lx.at_end()) lx.fail("trailing input");
  return eval_expr(e, f, {});
}

/// Parses a polynomial in one variable, e.g. "x^2 - (1 + t)".
inline Poly parse_poly(const Field& f, const std::string& text, const std::string& var = "x") {
  Lexer lx(text);
  ExprParser p(lx, f, [&var](const std::string& s) { return s == var; });
  ExprPtr e = p.parse_expr();
  if (!lx.at_end()) lx.fail("trailing input");
  return expr_to_poly(e, var, f, {});
}

}  // namespace hqe
