#include "coarse/dsl.hpp"

#include <cctype>

namespace coarse {

namespace {

constexpr std::size_t kMaxInput = 64 * 1024;
constexpr int kMaxDepth = 200;

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(std::size_t at, std::string expected) {
    throw DslParseError("parse error at byte " + std::to_string(at) + ": expected " + expected,
                        {at, std::move(expected)});
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) fail(pos, what);
  }

  CrossExpr parse_expr(int depth) {
    if (depth > kMaxDepth) fail(pos, "a shallower expression (depth limit reached)");
    CrossExpr lhs = parse_term(depth + 1);
    for (;;) {
      skip_ws();
      if (pos >= text.size()) break;
      const char c = text[pos];
      if (c != '+' && c != '-') break;
      ++pos;
      CrossExpr rhs = parse_term(depth + 1);
      CrossExpr node;
      node.op = (c == '+') ? CrossExpr::Op::Add : CrossExpr::Op::Sub;
      node.args.push_back(std::move(lhs));
      node.args.push_back(std::move(rhs));
      lhs = std::move(node);
    }
    return lhs;
  }

  CrossExpr parse_term(int depth) {
    if (depth > kMaxDepth) fail(pos, "a shallower expression (depth limit reached)");
    CrossExpr lhs = parse_factor(depth + 1);
    for (;;) {
      skip_ws();
      if (pos >= text.size() || text[pos] != '*') break;
      ++pos;
      CrossExpr rhs = parse_factor(depth + 1);
      CrossExpr node;
      node.op = CrossExpr::Op::Mul;
      node.args.push_back(std::move(lhs));
      node.args.push_back(std::move(rhs));
      lhs = std::move(node);
    }
    return lhs;
  }

  CrossExpr parse_factor(int depth) {
    if (depth > kMaxDepth) fail(pos, "a shallower expression (depth limit reached)");
    skip_ws();
    if (pos >= text.size()) fail(pos, "integer, variable, 'dxy', 'abs', 'min', 'max' or '('");
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_int();
    if (c == '(') {
      ++pos;
      CrossExpr inner = parse_expr(depth + 1);
      expect(')', "')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_word(depth);
    fail(pos, "integer, variable, 'dxy', 'abs', 'min', 'max' or '('");
  }

  CrossExpr parse_int() {
    const std::size_t start = pos;
    Dist value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      if (value > kMaxQuanta) fail(start, "an integer literal <= 2^40");
      ++pos;
    }
    CrossExpr node;
    node.op = CrossExpr::Op::Literal;
    node.literal = value;
    return node;
  }

  CrossExpr parse_word(int depth) {
    const std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])))) ++pos;
    const std::string_view word = text.substr(start, pos - start);

    if (word == "dxy") {
      CrossExpr node;
      node.op = CrossExpr::Op::Dxy;
      return node;
    }
    if (word == "abs" || word == "min" || word == "max") {
      expect('(', "'(' after function name");
      std::vector<CrossExpr> args;
      args.push_back(parse_expr(depth + 1));
      while (eat(',')) args.push_back(parse_expr(depth + 1));
      expect(')', "')'");
      const std::size_t want = (word == "abs") ? 1 : 2;
      if (args.size() != want) {
        fail(start, std::string(word) + " requires " + std::to_string(want) +
                        (want == 1 ? " argument" : " arguments"));
      }
      CrossExpr node;
      node.op = (word == "abs")   ? CrossExpr::Op::Abs
                : (word == "min") ? CrossExpr::Op::Min
                                  : CrossExpr::Op::Max;
      node.args = std::move(args);
      return node;
    }
    if (word.size() == 2 && (word[0] == 'x' || word[0] == 'y') && word[1] >= '0' && word[1] <= '3') {
      CrossExpr node;
      node.op = CrossExpr::Op::Var;
      node.on_y = (word[0] == 'y');
      node.axis = word[1] - '0';
      return node;
    }
    fail(start, "one of x0..x3, y0..y3, 'dxy', 'abs', 'min', 'max'");
  }
};

bool is_add_or_sub(const CrossExpr& e) {
  return e.op == CrossExpr::Op::Add || e.op == CrossExpr::Op::Sub;
}

void print_rec(const CrossExpr& e, std::string& out) {
  switch (e.op) {
    case CrossExpr::Op::Literal:
      out += std::to_string(e.literal);
      return;
    case CrossExpr::Op::Var:
      out += e.on_y ? 'y' : 'x';
      out += static_cast<char>('0' + e.axis);
      return;
    case CrossExpr::Op::Dxy:
      out += "dxy";
      return;
    case CrossExpr::Op::Abs:
    case CrossExpr::Op::Min:
    case CrossExpr::Op::Max: {
      out += (e.op == CrossExpr::Op::Abs) ? "abs" : (e.op == CrossExpr::Op::Min) ? "min" : "max";
      out += '(';
      for (std::size_t a = 0; a < e.args.size(); ++a) {
        if (a) out += ',';
        print_rec(e.args[a], out);
      }
      out += ')';
      return;
    }
    case CrossExpr::Op::Add:
    case CrossExpr::Op::Sub: {
      print_rec(e.args[0], out);
      out += (e.op == CrossExpr::Op::Add) ? '+' : '-';
      const bool paren = is_add_or_sub(e.args[1]);
      if (paren) out += '(';
      print_rec(e.args[1], out);
      if (paren) out += ')';
      return;
    }
    case CrossExpr::Op::Mul: {
      const bool lp = is_add_or_sub(e.args[0]);
      if (lp) out += '(';
      print_rec(e.args[0], out);
      if (lp) out += ')';
      out += '*';
      const bool rp = is_add_or_sub(e.args[1]) || e.args[1].op == CrossExpr::Op::Mul;
      if (rp) out += '(';
      print_rec(e.args[1], out);
      if (rp) out += ')';
      return;
    }
  }
}

Dist eval_rec(const CrossExpr& e, std::span<const Dist> x, std::span<const Dist> y, Dist dxy) {
  auto checked = [](bool overflow, Dist v) {
    if (overflow) throw DslEvalError("evaluation overflow", EvalErrorKind::Overflow);
    return v;
  };
  switch (e.op) {
    case CrossExpr::Op::Literal:
      return e.literal;
    case CrossExpr::Op::Var: {
      const auto& label = e.on_y ? y : x;
      if (static_cast<std::size_t>(e.axis) >= label.size()) {
        throw DslEvalError(std::string("coordinate ") + (e.on_y ? 'y' : 'x') +
                               std::to_string(e.axis) + " is not present in this space",
                           EvalErrorKind::MissingCoordinate);
      }
      return label[e.axis];
    }
    case CrossExpr::Op::Dxy:
      return dxy;
    case CrossExpr::Op::Abs: {
      const Dist v = eval_rec(e.args[0], x, y, dxy);
      return v < 0 ? -v : v;
    }
    case CrossExpr::Op::Min: {
      const Dist a = eval_rec(e.args[0], x, y, dxy);
      const Dist b = eval_rec(e.args[1], x, y, dxy);
      return a < b ? a : b;
    }
    case CrossExpr::Op::Max: {
      const Dist a = eval_rec(e.args[0], x, y, dxy);
      const Dist b = eval_rec(e.args[1], x, y, dxy);
      return a > b ? a : b;
    }
    case CrossExpr::Op::Add: {
      const Dist a = eval_rec(e.args[0], x, y, dxy);
      const Dist b = eval_rec(e.args[1], x, y, dxy);
      Dist r = 0;
      return checked(__builtin_add_overflow(a, b, &r), r);
    }
    case CrossExpr::Op::Sub: {
      const Dist a = eval_rec(e.args[0], x, y, dxy);
      const Dist b = eval_rec(e.args[1], x, y, dxy);
      Dist r = 0;
      return checked(__builtin_sub_overflow(a, b, &r), r);
    }
    case CrossExpr::Op::Mul: {
      const Dist a = eval_rec(e.args[0], x, y, dxy);
      const Dist b = eval_rec(e.args[1], x, y, dxy);
      Dist r = 0;
      return checked(__builtin_mul_overflow(a, b, &r), r);
    }
  }
  throw DslEvalError("unreachable", EvalErrorKind::Overflow);
}

}  // namespace

CrossExpr parse_cross_expr(std::string_view text) {
  if (text.size() > kMaxInput) {
    throw DslParseError("expression text exceeds 64 KiB", {0, "shorter input"});
  }
  Parser p{text};
  CrossExpr e = p.parse_expr(0);
  p.skip_ws();
  if (p.pos != text.size()) p.fail(p.pos, "end of input, '+', '-' or '*'");
  return e;
}

std::optional<CrossExpr> try_parse_cross_expr(std::string_view text, ParseIssue& issue) {
  try {
    return parse_cross_expr(text);
  } catch (const DslParseError& e) {
    issue = e.issue;
    return std::nullopt;
  }
}

std::string print_expr(const CrossExpr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

Dist eval_cross_expr(const CrossExpr& e, std::span<const Dist> x_label,
                     std::span<const Dist> y_label, Dist base_distance) {
  const Dist v = eval_rec(e, x_label, y_label, base_distance);
  if (v < 1) {
    throw DslEvalError("cross value " + std::to_string(v) + " is below the 1-quantum floor",
                       EvalErrorKind::BelowFloor, v);
  }
  return v;
}

}  // namespace coarse
