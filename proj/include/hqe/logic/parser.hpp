#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "hqe/logic/formula.hpp"

namespace hqe {

/// Recursive-descent parser for the formula grammar.
///
///   formula := or ["->" formula]
///   or      := and ("|" and)*
///   and     := unary ("&" unary)*
///   unary   := "!" unary | ("EX"|"ALL") x ":" sort "." formula | primary
///   sort    := "K" | "RV[" d "]"
///   primary := "true" | "false" | "(" formula ")" | atom
///   atom    := "oplus[" d "](" r ("," r)+ ")" | "v(" r ")" cmp "v(" r ")"
///            | r "=" r | f "=" f
///   r       := rv[d](f) | rv[d]{...} | proj[d](r) | w | -r | r*r | r^k | (r)
///
/// Identifiers not bound as RV variables are field variables.
class FormulaParser {
 public:
  FormulaParser(Lexer& lx, const Field& f, std::map<std::string, std::int64_t> rv_scope = {})
      : lx_(lx), f_(f), rv_(std::move(rv_scope)) {}

  FormulaPtr parse_formula() {
    FormulaPtr lhs = parse_or();
    if (lx_.accept("->")) return fm::implies(lhs, parse_formula());
    return lhs;
  }

 private:
  static bool reserved(const std::string& s) {
    static const std::set<std::string> r = {"rv", "proj", "oplus", "v", "EX", "ALL", "K", "RV",
                                            "true", "false", "O", "t", "inf", "unit"};
    return r.contains(s);
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (lx_.accept("|")) lhs = fm::disj(lhs, parse_and());
    return lhs;
  }
  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_unary();
    while (lx_.accept("&")) lhs = fm::conj(lhs, parse_unary());
    return lhs;
  }
  FormulaPtr parse_unary() {
    if (lx_.accept("!")) return fm::negate(parse_unary());
    if (lx_.is_ident("EX") || lx_.is_ident("ALL")) return parse_quantifier();
    return parse_primary();
  }
  FormulaPtr parse_quantifier() {
    bool ex = lx_.next().text == "EX";
    std::string x = lx_.expect_ident();
    if (reserved(x)) lx_.fail("reserved word used as a variable: " + x);
    lx_.expect(":");
    auto kind = ex ? Formula::Kind::kExists : Formula::Kind::kForall;
    if (lx_.accept("K")) {
      lx_.expect(".");
      auto saved = rv_;
      rv_.erase(x);
      FormulaPtr body = parse_formula();
      rv_ = saved;
      return fm::quant(kind, x, Sort::kField, 0, body);
    }
    lx_.expect("RV");
    std::int64_t d = parse_order();
    lx_.expect(".");
    auto saved = rv_;
    rv_[x] = d;
    FormulaPtr body = parse_formula();
    rv_ = saved;
    return fm::quant(kind, x, Sort::kRV, d, body);
  }
  std::int64_t parse_order() {
    lx_.expect("[");
    std::int64_t d = lx_.expect_int();
    if (d < 0) lx_.fail("negative order");
    lx_.expect("]");
    return d;
  }

  FormulaPtr parse_primary() {
    if (lx_.accept("true")) return fm::truth(true);
    if (lx_.accept("false")) return fm::truth(false);
    if (lx_.is_sym("(")) {
      // "(" opens either a subformula or a term; try the subformula first
      auto m = lx_.mark();
      std::optional<SyntaxError> first;
      try {
        lx_.next();
        FormulaPtr inner = parse_formula();
        lx_.expect(")");
        if (!lx_.is_sym("=") && !lx_.is_sym("*") && !lx_.is_sym("^") && !lx_.is_sym("+") &&
            !lx_.is_sym("-") && !lx_.is_sym("/")) {
          return inner;
        }
      } catch (const SyntaxError& e) {
        first = e;
      }
      lx_.reset(m);
      try {
        return parse_atom();
      } catch (const SyntaxError& e) {
        if (first && first->position > e.position) throw *first;
        throw;
      }
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    if (lx_.is_ident("oplus")) {
      lx_.next();
      std::int64_t d = parse_order();
      lx_.expect("(");
      std::vector<RVPtr> ts{parse_rv()};
      while (lx_.accept(",")) ts.push_back(parse_rv());
      lx_.expect(")");
      if (ts.size() < 2) lx_.fail("oplus needs a summand and a witness");
      for (const auto& t : ts) {
        if (t->order != d) lx_.fail("oplus argument of order " + std::to_string(t->order) + ", expected " + std::to_string(d));
      }
      return fm::oplus(d, ts);
    }
    if (lx_.is_ident("v") && lx_.is_sym("(", 1)) {
      lx_.next();
      lx_.expect("(");
      RVPtr a = parse_rv();
      lx_.expect(")");
      std::string cmp;
      for (const char* c : {"<=", ">=", "!=", "<", ">", "="}) {
        if (lx_.accept(c)) {
          cmp = c;
          break;
        }
      }
      if (cmp.empty()) lx_.fail("expected a comparison");
      if (!lx_.is_ident("v")) lx_.fail("expected v(...)");
      lx_.next();
      lx_.expect("(");
      RVPtr b = parse_rv();
      lx_.expect(")");
      return fm::vcmp(a, cmp, b);
    }
    auto m = lx_.mark();
    std::optional<SyntaxError> rv_err;
    try {
      RVPtr a = parse_rv();
      lx_.expect("=");
      RVPtr b = parse_rv();
      if (a->order != b->order) lx_.fail("RV equation between orders " + std::to_string(a->order) + " and " + std::to_string(b->order));
      return fm::rv_eq(a, b);
    } catch (const SyntaxError& e) {
      rv_err = e;
    }
    lx_.reset(m);
    try {
      ExprPtr a = parse_field();
      lx_.expect("=");
      ExprPtr b = parse_field();
      return fm::poly_zero(a, b);
    } catch (const SyntaxError& e) {
      if (rv_err->position > e.position) throw *rv_err;
      throw;
    }
  }

  ExprPtr parse_field() {
    ExprParser p(lx_, f_, [this](const std::string& s) { return !reserved(s) && !rv_.contains(s); });
    return p.parse_expr();
  }

  RVPtr parse_rv() {
    RVPtr lhs = parse_rv_unary();
    while (lx_.accept("*")) {
      RVPtr rhs = parse_rv_unary();
      if (lhs->order != rhs->order) lx_.fail("product of RV terms of different orders");
      lhs = RVTerm::mul(lhs, rhs);
    }
    return lhs;
  }
  RVPtr parse_rv_unary() {
    if (lx_.accept("-")) return RVTerm::neg(parse_rv_unary());
    RVPtr base = parse_rv_atom();
    if (lx_.accept("^")) return RVTerm::pow(base, lx_.expect_int());
    return base;
  }
  RVPtr parse_rv_atom() {
    if (lx_.accept("(")) {
      RVPtr r = parse_rv();
      lx_.expect(")");
      return r;
    }
    if (lx_.accept("rv")) {
      std::int64_t d = parse_order();
      if (lx_.is_sym("{")) return RVTerm::literal(parse_rv_body(lx_, f_, d));
      lx_.expect("(");
      ExprPtr e = parse_field();
      lx_.expect(")");
      return RVTerm::rv_of(e, d);
    }
    if (lx_.accept("proj")) {
      std::int64_t d = parse_order();
      lx_.expect("(");
      RVPtr r = parse_rv();
      lx_.expect(")");
      if (d > r->order) lx_.fail("projection to a larger order");
      return RVTerm::proj(r, d);
    }
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::kIdent && rv_.contains(t.text)) {
      std::string n = lx_.next().text;
      return RVTerm::var(n, rv_.at(n));
    }
    lx_.fail("expected an RV term");
  }

  Lexer& lx_;
  Field f_;
  std::map<std::string, std::int64_t> rv_;
};

/// Parses a whole formula. `rv_free` declares free RV variables and their
/// orders; every other free identifier is a field variable.
inline FormulaPtr parse_formula(const std::string& text, const Field& f,
                                const std::map<std::string, std::int64_t>& rv_free = {}) {
  Lexer lx(text);
  FormulaParser p(lx, f, rv_free);
  FormulaPtr out = p.parse_formula();
  if (!lx.at_end()) lx.fail("trailing input");
  return out;
}

}  // namespace hqe
