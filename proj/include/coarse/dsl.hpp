#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coarse/dist.hpp"
#include "coarse/errors.hpp"

namespace coarse {

// Expression tree for cross-distance formulas. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := INT | VAR | 'dxy' | ('abs'|'min'|'max') '(' args ')' | '(' expr ')'
//   VAR    := x0..x3 | y0..y3
// '+', '-', '*' are left-associative; '-' is binary only.
struct CrossExpr {
  enum class Op { Literal, Var, Dxy, Abs, Min, Max, Add, Sub, Mul };

  Op op = Op::Literal;
  Dist literal = 0;   // Literal
  int axis = 0;       // Var: coordinate index 0..3
  bool on_y = false;  // Var: x coordinate (false) or y coordinate (true)
  std::vector<CrossExpr> args;

  bool operator==(const CrossExpr&) const = default;
};

struct ParseIssue {
  std::size_t position = 0;  // byte offset into the input
  std::string expected;
};

struct DslParseError : Error {
  ParseIssue issue;
  DslParseError(const std::string& msg, ParseIssue detail) : Error(msg), issue(std::move(detail)) {}
};

enum class EvalErrorKind { BelowFloor, MissingCoordinate, Overflow };

struct DslEvalError : Error {
  EvalErrorKind kind;
  Dist value = 0;  // offending final value for BelowFloor
  DslEvalError(const std::string& msg, EvalErrorKind k, Dist v = 0) : Error(msg), kind(k), value(v) {}
};

CrossExpr parse_cross_expr(std::string_view text);  // throws DslParseError
std::optional<CrossExpr> try_parse_cross_expr(std::string_view text, ParseIssue& issue);

// Canonical form; parsing it back yields an identical tree.
std::string print_expr(const CrossExpr& e);

// Exact integer evaluation. Intermediates may be negative; the final value
// must be >= 1 quantum (throws DslEvalError otherwise).
Dist eval_cross_expr(const CrossExpr& e, std::span<const Dist> x_label,
                     std::span<const Dist> y_label, Dist base_distance);

}  // namespace coarse
