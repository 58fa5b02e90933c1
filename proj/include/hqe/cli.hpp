#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hqe/decomp.hpp"
#include "hqe/expr.hpp"
#include "hqe/hensel.hpp"
#include "hqe/logic/json.hpp"
#include "hqe/logic/parser.hpp"
#include "hqe/logic/qe.hpp"
#include "hqe/selftest/all.hpp"

namespace hqe::cli {

enum Exit : int { kOk = 0, kSyntax = 1, kPrecision = 2, kNonEffective = 3, kPrecondition = 4, kSelftestFailed = 5, kUsage = 64 };

struct FieldConfig {
  std::string backend = "laurent-q";
  std::int64_t p = 0;
  std::int64_t precision = 64;
  bool retry_double = false;

  void validate() const {
    if (backend != "laurent-q" && backend != "padic") throw PreconditionViolated("unknown field " + backend);
    if (precision < 8) throw PreconditionViolated("precision must be at least 8");
    if (backend == "padic") {
      mpz_class pz(static_cast<long>(p));
      if (p < 2 || !mpz_probab_prime_p(pz.get_mpz_t(), 30)) throw PreconditionViolated("--p must be a prime");
    }
  }
  Field field(std::int64_t prec) const { return backend == "padic" ? Field::padic(p, prec) : Field::laurent(prec); }
};

/// Default precision: HQE_PREC when set, else 64.
inline std::int64_t default_precision() {
  const char* s = std::getenv("HQE_PREC");
  if (s == nullptr || *s == '\0') return 64;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (*end != '\0') throw PreconditionViolated("HQE_PREC is not an integer");
  return v;
}

/// `name:order` pairs declaring free RV variables.
inline std::map<std::string, std::int64_t> rv_decls(const std::vector<std::string>& specs) {
  std::map<std::string, std::int64_t> out;
  for (const auto& s : specs) {
    auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0) throw PreconditionViolated("--rv-var expects name:order, got " + s);
    try {
      out[s.substr(0, colon)] = std::stoll(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw PreconditionViolated("--rv-var expects name:order, got " + s);
    }
  }
  return out;
}

/// Runs the command line. Output goes to `out`, diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hqe: quantifier elimination over henselian valued fields", "hqe"};
  app.fallthrough();
  app.require_subcommand(1);

  FieldConfig cfg;
  bool as_json = false;
  std::uint64_t seed = selftest::kDefaultSeed;
  std::vector<std::string> rv_vars;
  app.add_option("--field", cfg.backend, "laurent-q or padic")->check(CLI::IsMember({"laurent-q", "padic"}));
  app.add_option("--p", cfg.p, "prime for --field padic");
  app.add_option("--prec", cfg.precision, "working precision (default 64, or HQE_PREC)");
  app.add_option("--seed", seed, "seed for selftest");
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_flag("--retry-precision", cfg.retry_double, "on PrecisionExhausted, retry at doubled precision");
  app.add_option("--rv-var", rv_vars, "free RV variable of a formula, as name:order");

  std::string text, poly_text, from_text, var = "x", suite = "all";
  std::int64_t order = 0, sep = 0;
  std::optional<std::int64_t> rv_order;

  auto* eval = app.add_subcommand("eval", "evaluate a constant field expression");
  eval->add_option("expr", text)->required();
  auto* rvc = app.add_subcommand("rv", "leading term class of an expression");
  rvc->add_option("expr", text)->required();
  rvc->add_option("--order", order, "order delta")->required();
  auto* lift = app.add_subcommand("lift", "Newton lift of an approximate root");
  lift->add_option("--poly", poly_text, "polynomial in x")->required();
  lift->add_option("--from", from_text, "starting point a")->required();
  lift->add_option("--sep", sep, "delta in v(P(a)) > 2 v(P'(a)) + delta")->required();
  auto* dec = app.add_subcommand("decompose", "valuation pieces of a polynomial as JSON");
  dec->add_option("--poly", poly_text, "polynomial in x")->required();
  dec->add_option("--rv-order", rv_order, "emit the rv linearization cells at this order");
  auto* qec = app.add_subcommand("qe", "eliminate field quantifiers");
  qec->add_option("formula", text)->required();
  auto* dcd = app.add_subcommand("decide", "truth value of a sentence");
  dcd->add_option("formula", text)->required();
  auto* nfc = app.add_subcommand("normal-form", "pullback normal form in one variable");
  nfc->add_option("formula", text)->required();
  nfc->add_option("--var", var, "the field variable");
  auto* st = app.add_subcommand("selftest", "run the acceptance suites");
  st->add_option("--suite", suite, "suite name or number, or all");

  try {
    cfg.precision = default_precision();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  auto command = [&](const Field& f) -> std::string {
    std::ostringstream os;
    auto rv_map = rv_decls(rv_vars);
    if (eval->parsed()) {
      FieldElem x = parse_literal(f, text);
      // an inexact zero only bounds the valuation from below
      bool bound = x.is_zero() && !x.is_exact_zero();
      std::string v = bound ? x.abs_precision().str() : val_or_inf(x).str();
      if (as_json) {
        os << json{{"value", format(x)}, {bound ? "valuation_at_least" : "valuation", v}}.dump() << "\n";
      } else {
        os << format(x) << " (v" << (bound ? ">=" : "=") << v << ")\n";
      }
    } else if (rvc->parsed()) {
      FieldElem x = parse_literal(f, text);
      RVElem r = x.is_exact_zero() ? RVElem::infinity(f, order) : rv(x, order);
      if (as_json) {
        json units = json::array();
        for (const auto& u : r.unit) units.push_back(u.get_str());
        os << json{{"rv", format(r)}, {"order", order}, {"value", r.val().str()}, {"unit", units}}.dump() << "\n";
      } else {
        os << format(r) << "\n";
      }
    } else if (lift->parsed()) {
      Poly P = parse_poly(f, poly_text);
      LiftCertificate c = newton_lift(P, parse_literal(f, from_text), sep);
      if (as_json) {
        os << json{{"root", format(c.root)}, {"iterations", c.iterations}, {"separation", c.separation.str()}}.dump() << "\n";
      } else {
        os << "root: " << format(c.root) << "\niterations: " << c.iterations << "\nv(a - root) >= " << c.separation.str() << "\n";
      }
    } else if (dec->parsed()) {
      Poly P = parse_poly(f, poly_text);
      json j;
      j["poly"] = format(P);
      if (rv_order) {
        if (*rv_order < 0) throw OrderViolation("negative order");
        json cells = json::array();
        for (const auto& c : rv_decompose({P})) {
          json pj = rv_piece_json(c.pieces[0]);
          pj["working_order"] = *rv_order + c.pieces[0].q_val.as_int();
          cells.push_back(pj);
        }
        j["order"] = *rv_order;
        j["cells"] = cells;
      } else {
        json pieces = json::array();
        for (const auto& p : decompose(P, SwissCheese::whole(f))) pieces.push_back(piece_json(p));
        j["pieces"] = pieces;
      }
      os << j.dump(as_json ? -1 : 2) << "\n";
    } else if (qec->parsed()) {
      FormulaPtr out_f = qe(parse_formula(text, f, rv_map), f);
      os << (as_json ? formula_to_json(out_f).dump() : print_formula(out_f)) << "\n";
    } else if (dcd->parsed()) {
      bool v = decide(parse_formula(text, f, rv_map), f);
      os << (as_json ? json{{"value", v}}.dump() : std::string(v ? "TRUE" : "FALSE")) << "\n";
    } else if (nfc->parsed()) {
      NormalForm nf = normal_form(parse_formula(text, f, rv_map), var, f);
      if (as_json) {
        json cs = json::array();
        for (const auto& c : nf.centers) cs.push_back(format(c));
        os << json{{"var", nf.var}, {"centers", cs}, {"orders", nf.orders}, {"names", nf.names}, {"D", formula_to_json(nf.D)}}.dump()
           << "\n";
      } else {
        for (std::size_t i = 0; i < nf.centers.size(); ++i) {
          os << nf.names[i] << " = rv[" << nf.orders[i] << "](" << var << " - (" << format(nf.centers[i]) << "))\n";
        }
        os << "D: " << print_formula(nf.D) << "\n";
      }
    }
    return os.str();
  };

  try {
    if (st->parsed()) {
      // timings go to the diagnostic stream so that stdout is reproducible
      bool all_pass = true;
      json reports = json::array();
      for (const auto& r : selftest::run_suites(suite, seed)) {
        all_pass = all_pass && r.pass();
        if (as_json) {
          reports.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass()}, {"checks", r.cases}, {"failures", r.failures}, {"notes", r.notes}});
        } else {
          out << (r.pass() ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": " << r.cases << " checks, " << r.failures << " failures\n";
          for (const auto& n : r.notes) out << "      " << n << "\n";
        }
        err << "[" << r.id << "] " << r.seconds << " s (budget " << r.budget_seconds << " s)\n";
      }
      if (as_json) out << reports.dump() << "\n";
      return all_pass ? kOk : kSelftestFailed;
    }
    cfg.validate();
    for (std::int64_t prec = cfg.precision;; prec *= 2) {
      try {
        out << command(cfg.field(prec));
        return kOk;
      } catch (const PrecisionExhausted& e) {
        if (!cfg.retry_double || prec >= 16 * cfg.precision) throw;
        err << "precision " << prec << " exhausted (" << e.what() << "), retrying at " << 2 * prec << "\n";
      }
    }
  } catch (const SyntaxError& e) {
    err << e.what() << "\n";
    return kSyntax;
  } catch (const PrecisionExhausted& e) {
    err << e.what() << "\n";
    return kPrecision;
  } catch (const NonEffectiveQuantifier& e) {
    err << e.what() << "\n";
    return kNonEffective;
  } catch (const Error& e) {
    // remaining library errors are violated preconditions of the operation
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  }
}

}  // namespace hqe::cli
