#pragma once

#include <json.hpp>

#include "hqe/logic/parser.hpp"

namespace hqe {

using json = nlohmann::json;

// Field expressions and RV literals are stored as their printed text; the
// tree structure above them is explicit.

inline json rv_to_json(const RVPtr& t) {
  json j;
  j["order"] = t->order;
  switch (t->op) {
    case RVTerm::Op::kRv:
      j["op"] = "rv";
      j["expr"] = print_expr(t->field);
      break;
    case RVTerm::Op::kLit:
      j["op"] = "lit";
      j["value"] = format(t->lit);
      break;
    case RVTerm::Op::kVar:
      j["op"] = "var";
      j["name"] = t->name;
      break;
    case RVTerm::Op::kMul: j["op"] = "mul"; break;
    case RVTerm::Op::kNeg: j["op"] = "neg"; break;
    case RVTerm::Op::kPow:
      j["op"] = "pow";
      j["exponent"] = t->exponent;
      break;
    case RVTerm::Op::kProj: j["op"] = "proj"; break;
  }
  if (!t->args.empty()) {
    j["args"] = json::array();
    for (const auto& a : t->args) j["args"].push_back(rv_to_json(a));
  }
  return j;
}

inline json formula_to_json(const FormulaPtr& f) {
  using K = Formula::Kind;
  json j;
  switch (f->kind) {
    case K::kTrue: j["kind"] = "true"; break;
    case K::kFalse: j["kind"] = "false"; break;
    case K::kPolyZero:
      j["kind"] = "poly_zero";
      j["lhs"] = print_expr(f->lhs);
      j["rhs"] = print_expr(f->rhs);
      break;
    case K::kRVEq: j["kind"] = "rv_eq"; break;
    case K::kOplus:
      j["kind"] = "oplus";
      j["order"] = f->order;
      break;
    case K::kVCmp:
      j["kind"] = "vcmp";
      j["cmp"] = f->cmp;
      break;
    case K::kNot: j["kind"] = "not"; break;
    case K::kAnd: j["kind"] = "and"; break;
    case K::kOr: j["kind"] = "or"; break;
    case K::kImp: j["kind"] = "implies"; break;
    case K::kExists:
    case K::kForall:
      j["kind"] = f->kind == K::kExists ? "exists" : "forall";
      j["var"] = f->var;
      j["sort"] = f->sort == Sort::kField ? "K" : "RV";
      if (f->sort == Sort::kRV) j["order"] = f->order;
      break;
  }
  if (!f->terms.empty()) {
    j["terms"] = json::array();
    for (const auto& t : f->terms) j["terms"].push_back(rv_to_json(t));
  }
  if (!f->kids.empty()) {
    j["kids"] = json::array();
    for (const auto& k : f->kids) j["kids"].push_back(formula_to_json(k));
  }
  return j;
}

namespace detail {

inline ExprPtr expr_from_text(const std::string& s, const Field& f) {
  Lexer lx(s);
  ExprParser p(lx, f, [](const std::string&) { return true; });
  ExprPtr e = p.parse_expr();
  if (!lx.at_end()) lx.fail("trailing input in expression");
  return e;
}

inline RVElem rv_literal_from_text(const std::string& s, const Field& f, std::int64_t d) {
  RVElem e = parse_rv(f, s);
  if (e.order != d) throw SyntaxError("literal order disagrees with node order", 0);
  return e;
}

}  // namespace detail

inline RVPtr rv_from_json(const json& j, const Field& f) {
  const std::string op = j.at("op");
  const std::int64_t d = j.at("order");
  auto arg = [&](std::size_t i) { return rv_from_json(j.at("args").at(i), f); };
  if (op == "rv") return RVTerm::rv_of(detail::expr_from_text(j.at("expr"), f), d);
  if (op == "lit") return RVTerm::literal(detail::rv_literal_from_text(j.at("value"), f, d));
  if (op == "var") return RVTerm::var(j.at("name"), d);
  if (op == "mul") return RVTerm::mul(arg(0), arg(1));
  if (op == "neg") return RVTerm::neg(arg(0));
  if (op == "pow") return RVTerm::pow(arg(0), j.at("exponent"));
  if (op == "proj") return RVTerm::proj(arg(0), d);
  throw SyntaxError("unknown RV term op " + op, 0);
}

inline FormulaPtr formula_from_json(const json& j, const Field& f) {
  const std::string k = j.at("kind");
  auto kid = [&](std::size_t i) { return formula_from_json(j.at("kids").at(i), f); };
  std::vector<RVPtr> ts;
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) ts.push_back(rv_from_json(t, f));
  }
  if (k == "true") return fm::truth(true);
  if (k == "false") return fm::truth(false);
  if (k == "poly_zero") return fm::poly_zero(detail::expr_from_text(j.at("lhs"), f), detail::expr_from_text(j.at("rhs"), f));
  if (k == "rv_eq") return fm::rv_eq(ts.at(0), ts.at(1));
  if (k == "oplus") return fm::oplus(j.at("order"), ts);
  if (k == "vcmp") return fm::vcmp(ts.at(0), j.at("cmp"), ts.at(1));
  if (k == "not") return fm::negate(kid(0));
  if (k == "and") return fm::conj(kid(0), kid(1));
  if (k == "or") return fm::disj(kid(0), kid(1));
  if (k == "implies") return fm::implies(kid(0), kid(1));
  if (k == "exists" || k == "forall") {
    auto kind = k == "exists" ? Formula::Kind::kExists : Formula::Kind::kForall;
    bool field = j.at("sort") == "K";
    return fm::quant(kind, j.at("var"), field ? Sort::kField : Sort::kRV, field ? 0 : j.at("order").get<std::int64_t>(), kid(0));
  }
  throw SyntaxError("unknown formula kind " + k, 0);
}

}  // namespace hqe
