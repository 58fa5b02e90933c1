#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hqe/ball.hpp"
#include "hqe/collision.hpp"
#include "hqe/errors.hpp"
#include "hqe/expr.hpp"
#include "hqe/hensel.hpp"
#include "hqe/literal.hpp"
#include "hqe/poly.hpp"
#include "hqe/rv.hpp"

namespace hqe {

/// A piece of a decomposition of f: on `cheese`,
/// v(a_m (x-alpha)^m) <= v(f(x)) <= v(a_m (x-alpha)^m) + 2^m v(m!).
struct Piece {
  SwissCheese cheese;
  FieldElem center;
  std::vector<FieldElem> coeffs;  // f = sum coeffs[i] (x - center)^i
  std::int64_t m = 0;
  ValQ severity_bound = 0;  // 2^m v(m!)
  mpz_class q = 1;          // (m!)^(2^m) in padic, 1 in laurent-q
  ValQ q_val = 0;           // v(q)
};

namespace detail {

inline mpz_class factorial(std::int64_t m) {
  mpz_class r = 1;
  for (std::int64_t i = 2; i <= m; ++i) r *= i;
  return r;
}

inline Piece make_piece(const SwissCheese& s, const FieldElem& alpha, std::vector<FieldElem> a, std::int64_t m) {
  const Field& f = alpha.field();
  Piece p;
  p.cheese = s;
  p.center = alpha;
  p.coeffs = std::move(a);
  p.m = m;
  p.severity_bound = collision_threshold(f, m, 0);
  if (f.is_padic()) {
    mpz_class fm = factorial(m);
    mpz_pow_ui(p.q.get_mpz_t(), fm.get_mpz_t(), 1UL << m);
  }
  p.q_val = p.severity_bound;
  return p;
}

/// Largest index i with a_i != 0 attaining min_j v(a_j) + j r; -1 if f = 0.
inline std::int64_t top_min_index(const std::vector<FieldElem>& a, const ValQ& r) {
  ValQ mn = ValQ::inf();
  std::int64_t best = -1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    ValQ t = a[i].val() + static_cast<std::int64_t>(i) * r;
    if (t <= mn) {
      mn = t;
      best = static_cast<std::int64_t>(i);
    }
  }
  return best;
}

inline bool sphere_meets(const SwissCheese& s, const FieldElem& alpha, std::int64_t r) {
  SwissCheese sphere{Ball::closed(alpha, ValQ(r)), {Ball::closed(alpha, ValQ(r + 1))}};
  return !cheese_intersect(s, sphere).is_empty();
}

inline void add_candidates(std::set<std::int64_t>& out, const ValQ& c) {
  if (!c.is_finite()) return;
  for (std::int64_t d = -1; d <= 1; ++d) {
    out.insert(c.floor() + d);
    out.insert(c.ceil() + d);
  }
}

inline void ball_candidates(std::set<std::int64_t>& out, const Ball& b, const FieldElem& alpha) {
  if (b.is_whole() || b.is_empty()) return;
  if (b.is_closed()) add_candidates(out, ValQ(b.radius));
  FieldElem d = b.center - alpha;
  if (!d.is_zero()) add_candidates(out, d.val());
}

}  // namespace detail

/// m(f, alpha, S): the largest index whose term v(a_i (x-alpha)^i) is minimal
/// for some x in S. Coefficients that vanish to precision count as zero.
inline std::int64_t m_bound(const Poly& f, const FieldElem& alpha, const SwissCheese& S) {
  std::vector<FieldElem> a = taylor_shift(f, alpha);
  std::int64_t m = -1;
  if (!a.empty() && !a[0].is_zero() && S.contains(alpha)) m = 0;
  std::set<std::int64_t> cand;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i].is_zero() || a[j].is_zero()) continue;
      detail::add_candidates(cand, (a[i].val() - a[j].val()) / static_cast<std::int64_t>(j - i));
    }
  }
  detail::ball_candidates(cand, S.outer, alpha);
  for (const auto& h : S.holes) detail::ball_candidates(cand, h, alpha);
  if (cand.empty()) cand.insert(0);
  std::int64_t lo = *cand.begin() - 2, hi = *cand.rbegin() + 2;
  cand.insert(lo);
  cand.insert(hi);
  for (std::int64_t r : cand) {
    if (detail::sphere_meets(S, alpha, r)) m = std::max(m, detail::top_min_index(a, ValQ(r)));
  }
  return std::max<std::int64_t>(m, 0);
}

namespace detail {

inline void decompose_ball(const Poly& f, const Ball& B, const FieldElem& alpha, int depth, std::vector<Piece>& out) {
  if (depth > 64 * (f.degree() + 1)) throw RecursionBound("decompose: recursion bound reached");
  SwissCheese SB = SwissCheese::of(B);
  std::vector<FieldElem> a = taylor_shift(f, alpha);
  std::int64_t m = m_bound(f, alpha, SB);
  if (m == 0) {
    out.push_back(make_piece(SB, alpha, a, 0));
    return;
  }
  ValQ rho = ValQ::inf();
  ValQ vm = a[static_cast<std::size_t>(m)].val();
  for (std::int64_t i = 0; i < m; ++i) {
    const FieldElem& ai = a[static_cast<std::size_t>(i)];
    if (ai.is_zero()) continue;
    rho = min(rho, (ai.val() - vm) / (m - i));
  }
  if (rho.is_pos_inf()) {
    out.push_back(make_piece(SB, alpha, a, m));
    return;
  }
  // B minus B_{>=rho}(alpha): only index m is minimal there
  SwissCheese outer_part{B, {Ball::closed(alpha, rho)}};
  outer_part.normalize();
  if (!outer_part.is_empty()) out.push_back(make_piece(outer_part, alpha, a, m));

  if (rho.is_integer()) {
    std::int64_t r = rho.as_int();
    Piece tmp = make_piece(SB, alpha, a, m);
    auto classes = collision_classes(f, alpha, r, tmp.severity_bound);
    SwissCheese annulus{intersect(B, Ball::closed(alpha, rho)), {Ball::open(alpha, rho)}};
    for (const auto& c : classes) annulus.holes.push_back(Ball::open(c.lambda, rho));
    annulus.normalize();
    if (!annulus.is_empty()) out.push_back(make_piece(annulus, alpha, a, m));
    for (const auto& c : classes) {
      Ball sub = intersect(B, Ball::open(c.lambda, rho));
      if (!sub.is_empty()) decompose_ball(f, sub, c.lambda, depth + 1, out);
    }
  }
  Ball inner = intersect(B, Ball::open(alpha, rho));
  if (!inner.is_empty()) decompose_ball(f, inner, alpha, depth + 1, out);
}

}  // namespace detail

/// A partition of S into pieces on which v(f(x)) is controlled by a single
/// term around the piece center. Centers are roots of derivatives of f.
inline std::vector<Piece> decompose(const Poly& f, const SwissCheese& S) {
  if (f.is_zero()) throw PreconditionViolated("decompose: zero polynomial");
  const Field& fld = f.field();
  std::vector<Piece> raw;
  if (f.degree() == 0) {
    raw.push_back(detail::make_piece(SwissCheese::whole(fld), FieldElem::zero(fld), f.coeffs(), 0));
  } else {
    std::int64_t d = f.degree();
    FieldElem alpha0 = -f.coeff(d - 1) / (FieldElem::from_rational(fld, d) * f.coeff(d));
    detail::decompose_ball(f, Ball::whole(fld), alpha0, 0, raw);
  }
  std::vector<Piece> out;
  for (auto& p : raw) {
    p.cheese = cheese_intersect(p.cheese, S);
    if (!p.cheese.is_empty()) out.push_back(std::move(p));
  }
  return out;
}

inline const Piece& piece_containing(const std::vector<Piece>& ps, const FieldElem& x) {
  for (const auto& p : ps) {
    if (p.cheese.contains(x)) return p;
  }
  throw NotInPiece("no piece contains the point");
}

/// v(a_m (x - alpha)^m).
inline ValQ piece_eval_v(const Piece& p, const FieldElem& x) {
  if (!p.cheese.contains(x)) throw NotInPiece("point outside the piece");
  FieldElem h = x - p.center;
  const FieldElem& am = p.coeffs[static_cast<std::size_t>(p.m)];
  if (p.m == 0) return val_or_inf(am);
  if (h.is_zero()) return ValQ::inf();
  return am.val() + p.m * h.val();
}

// ---------------------------------------------------------------------------
// RV linearization.

/// A piece on which rv_delta(f(x)) is the well-defined projection of
/// sum rv_{delta+v(q)}(a_j) rv_{delta+v(q)}(x - alpha)^j.
struct RVPiece {
  SwissCheese cheese;
  FieldElem center;
  std::vector<FieldElem> coeffs;
  mpz_class q = 1;
  ValQ q_val = 0;

  static RVPiece from(const Piece& p) { return {p.cheese, p.center, p.coeffs, p.q, p.q_val}; }
};

/// The RV terms rv_g(a_j) rv_g(x - alpha)^j, g = delta + v(q), skipping a_j = 0.
inline std::vector<RVElem> piece_terms(const RVPiece& p, const RVElem& w) {
  std::vector<RVElem> terms;
  std::int64_t g = w.order;
  for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
    if (p.coeffs[j].is_zero()) continue;
    terms.push_back(rv_mul(rv(p.coeffs[j], g), rv_pow(w, static_cast<std::int64_t>(j))));
  }
  if (terms.empty()) terms.push_back(RVElem::infinity(w.field, g));
  return terms;
}

/// rv_delta(f(x)) computed from the leading terms on the piece.
inline RVElem piece_eval_rv(const RVPiece& p, const FieldElem& x, std::int64_t delta) {
  if (!p.cheese.contains(x)) throw NotInPiece("point outside the piece");
  std::int64_t g = delta + p.q_val.as_int();
  FieldElem h = x - p.center;
  RVElem w = h.is_zero() ? RVElem::infinity(x.field(), g) : rv(h, g);
  std::vector<RVElem> terms = piece_terms(p, w);
  SumAnalysis an = rv_sum_analyze(terms);
  if (an.well_defined) return rv_project(*an.result, delta);
  if (!an.severity_known || an.severity > p.q_val) throw UndefinedSum("piece_eval_rv: sum not determined at order " + std::to_string(delta));
  return rv_project(*rv_sum_projection(terms), delta);
}
inline RVElem piece_eval_rv(const Piece& p, const FieldElem& x, std::int64_t delta) {
  return piece_eval_rv(RVPiece::from(p), x, delta);
}

namespace detail {
/// No collision anywhere around alpha: at every integer radius where two
/// terms tie, the residue polynomial has no nonzero root.
inline bool collision_free(const std::vector<FieldElem>& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i].is_zero() || a[j].is_zero()) continue;
      ValQ r = (a[i].val() - a[j].val()) / static_cast<std::int64_t>(j - i);
      if (!r.is_integer()) continue;
      ValQ mu = ValQ::inf();
      for (std::size_t k = 0; k < a.size(); ++k) mu = min(mu, val_or_inf(a[k]) + static_cast<std::int64_t>(k) * r);
      std::vector<mpq_class> res(a.size(), 0);
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k].is_zero() && a[k].val() + static_cast<std::int64_t>(k) * r == mu) res[k] = a[k].leading_digit();
      }
      for (const auto& u : residue_rational_roots(a.front().field(), res)) {
        if (u != 0) return false;
      }
    }
  }
  return true;
}
}  // namespace detail

/// RV pieces for one polynomial: all of K around the initial center when f
/// has no collision there, the decomposition pieces otherwise.
inline std::vector<RVPiece> rv_pieces(const Poly& f) {
  const Field& fld = f.field();
  std::vector<RVPiece> out;
  if (f.degree() >= 1) {
    std::int64_t d = f.degree();
    FieldElem alpha0 = -f.coeff(d - 1) / (FieldElem::from_rational(fld, d) * f.coeff(d));
    auto a = taylor_shift(f, alpha0);
    if (detail::collision_free(a)) {
      out.push_back({SwissCheese::whole(fld), alpha0, a, 1, 0});
      return out;
    }
  }
  for (const auto& p : decompose(f, SwissCheese::whole(fld))) out.push_back(RVPiece::from(p));
  return out;
}

/// A cell of the common partition: one RV piece per polynomial.
struct RVCell {
  SwissCheese cheese;
  std::vector<RVPiece> pieces;
};

inline std::vector<RVCell> rv_decompose(const std::vector<Poly>& fs) {
  if (fs.empty()) throw PreconditionViolated("rv_decompose: no polynomials");
  std::vector<RVCell> cells{{SwissCheese::whole(fs.front().field()), {}}};
  for (const auto& f : fs) {
    std::vector<RVCell> next;
    for (const auto& p : rv_pieces(f)) {
      for (const auto& c : cells) {
        SwissCheese s = cheese_intersect(c.cheese, p.cheese);
        if (s.is_empty()) continue;
        RVCell n{s, c.pieces};
        n.pieces.push_back(p);
        next.push_back(std::move(n));
      }
    }
    cells = std::move(next);
  }
  for (auto& c : cells) {
    for (auto& p : c.pieces) p.cheese = c.cheese;
  }
  return cells;
}

// ---------------------------------------------------------------------------
// JSON. Field elements are stored as literals, which parse back exactly;
// "text" fields are for reading and ignored on input.

namespace detail {

inline ValQ valq_from_string(const std::string& s) {
  if (s == "inf") return ValQ::inf();
  if (s == "-inf") return ValQ::neg_inf();
  auto slash = s.find('/');
  if (slash == std::string::npos) return ValQ(std::stoll(s));
  return ValQ(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

inline const char* ball_kind_name(Ball::Kind k) {
  switch (k) {
    case Ball::Kind::kWhole: return "whole";
    case Ball::Kind::kEmpty: return "empty";
    case Ball::Kind::kPoint: return "point";
    case Ball::Kind::kClosed: return "closed";
  }
  return "?";
}

}  // namespace detail

inline nlohmann::json ball_json(const Ball& b) {
  nlohmann::json j{{"kind", detail::ball_kind_name(b.kind)}, {"text", b.str()}};
  if (b.kind == Ball::Kind::kPoint || b.kind == Ball::Kind::kClosed) j["center"] = format(b.center);
  if (b.kind == Ball::Kind::kClosed) {
    j["radius"] = b.radius;
    j["shown_radius"] = b.shown_radius.str();
    j["shown_strict"] = b.shown_strict;
  }
  return j;
}

inline Ball ball_from_json(const nlohmann::json& j, const Field& f) {
  const std::string kind = j.at("kind").get<std::string>();
  Ball b = Ball::whole(f);
  if (kind == "whole") return b;
  if (kind == "empty") return Ball::empty(f);
  b.center = parse_literal(f, j.at("center").get<std::string>());
  if (kind == "point") return Ball::point(b.center);
  if (kind != "closed") throw PreconditionViolated("unknown ball kind " + kind);
  b.kind = Ball::Kind::kClosed;
  b.radius = j.at("radius").get<std::int64_t>();
  b.shown_radius = detail::valq_from_string(j.at("shown_radius").get<std::string>());
  b.shown_strict = j.at("shown_strict").get<bool>();
  return b;
}

inline nlohmann::json cheese_json(const SwissCheese& s) {
  nlohmann::json holes = nlohmann::json::array();
  for (const auto& h : s.holes) holes.push_back(ball_json(h));
  return {{"outer", ball_json(s.outer)}, {"holes", holes}};
}

inline SwissCheese cheese_from_json(const nlohmann::json& j, const Field& f) {
  SwissCheese s{ball_from_json(j.at("outer"), f), {}};
  for (const auto& h : j.at("holes")) s.holes.push_back(ball_from_json(h, f));
  return s;
}

inline nlohmann::json piece_json(const Piece& p) {
  nlohmann::json j = cheese_json(p.cheese);
  j["center"] = format(p.center);
  j["m"] = p.m;
  j["q"] = p.q.get_str();
  j["q_val"] = p.q_val.str();
  j["severity_bound"] = p.severity_bound.str();
  nlohmann::json cv = nlohmann::json::array(), cs = nlohmann::json::array();
  for (const auto& c : p.coeffs) {
    cs.push_back(format(c));
    cv.push_back(val_or_inf(c).str());
  }
  j["coeffs"] = cs;
  j["coeff_values"] = cv;
  return j;
}

inline Piece piece_from_json(const nlohmann::json& j, const Field& f) {
  Piece p;
  p.cheese = cheese_from_json(j, f);
  p.center = parse_literal(f, j.at("center").get<std::string>());
  for (const auto& c : j.at("coeffs")) p.coeffs.push_back(parse_literal(f, c.get<std::string>()));
  p.m = j.at("m").get<std::int64_t>();
  p.severity_bound = detail::valq_from_string(j.at("severity_bound").get<std::string>());
  p.q = mpz_class(j.at("q").get<std::string>());
  p.q_val = detail::valq_from_string(j.at("q_val").get<std::string>());
  return p;
}

inline nlohmann::json rv_piece_json(const RVPiece& p) {
  nlohmann::json j = cheese_json(p.cheese);
  j["center"] = format(p.center);
  j["q"] = p.q.get_str();
  j["q_val"] = p.q_val.str();
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : p.coeffs) cs.push_back(format(c));
  j["coeffs"] = cs;
  return j;
}

inline RVPiece rv_piece_from_json(const nlohmann::json& j, const Field& f) {
  RVPiece p;
  p.cheese = cheese_from_json(j, f);
  p.center = parse_literal(f, j.at("center").get<std::string>());
  for (const auto& c : j.at("coeffs")) p.coeffs.push_back(parse_literal(f, c.get<std::string>()));
  p.q = mpz_class(j.at("q").get<std::string>());
  p.q_val = detail::valq_from_string(j.at("q_val").get<std::string>());
  return p;
}

}  // namespace hqe
