#pragma once

#include <stdexcept>
#include <string>

namespace hqe {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A predicate or value is not determined by the digits currently known.
class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& what)
      : Error("precision exhausted: " + what) {}
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(const std::string& what = "")
      : Error(what.empty() ? "division by zero" : "division by zero: " + what) {}
};

class NegativeValue : public Error {
 public:
  explicit NegativeValue(const std::string& what)
      : Error("negative value: " + what) {}
};

class OrderMismatch : public Error {
 public:
  explicit OrderMismatch(const std::string& what)
      : Error("order mismatch: " + what) {}
};

class OrderViolation : public Error {
 public:
  explicit OrderViolation(const std::string& what)
      : Error("order violation: " + what) {}
};

class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(const std::string& what)
      : Error("precondition violated: " + what) {}
};

class NotInPiece : public Error {
 public:
  explicit NotInPiece(const std::string& what = "")
      : Error(what.empty() ? "point is not in the piece" : "point is not in the piece: " + what) {}
};

class RecursionBound : public Error {
 public:
  explicit RecursionBound(const std::string& what = "")
      : Error(what.empty() ? "recursion bound reached" : "recursion bound reached: " + what) {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t pos)
      : Error("syntax error at " + std::to_string(pos) + ": " + what),
        position(pos) {}
  std::size_t position;
};

class NonEffectiveQuantifier : public Error {
 public:
  explicit NonEffectiveQuantifier(const std::string& what)
      : Error("non-effective quantifier: " + what) {}
};

/// An RV sum evaluated as a function is not well-defined at the given point.
class UndefinedSum : public Error {
 public:
  explicit UndefinedSum(const std::string& what = "")
      : Error(what.empty() ? "RV sum is not well-defined" : "RV sum is not well-defined: " + what) {}
};

}  // namespace hqe
