#include "modelforge/eqc/emit.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace modelforge::eqc {

namespace {

constexpr std::array<std::string_view, 36> kReserved = {
    "False", "None",   "True",    "and",      "as",       "assert", "async",  "await",    "break",
    "class", "continue", "def",   "del",      "elif",     "else",   "except", "finally",  "for",
    "from",  "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",      "while",  "with",   "yield",    "math",
};

// Python operator binding strength; higher binds tighter.
int strength(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Select: return 0;
    case ExprKind::Not: return 3;
    case ExprKind::Neg: return 7;
    case ExprKind::Num: return e.value() < 0 ? 7 : 9;
    case ExprKind::Var:
    case ExprKind::Call: return 9;
    case ExprKind::Bin: break;
  }
  switch (e.op()) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul:
    case BinOp::Div: return 6;
    case BinOp::Mod: return 9;  // emitted as a call
    case BinOp::Pow: return 8;
    default: return 4;
  }
}

std::string number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string py(const Expr& e);

std::string paren(const Expr& e, bool need) { return need ? "(" + py(e) + ")" : py(e); }

std::string py(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Num: return number(e.value());
    case ExprKind::Var: return python_identifier(e.name());
    case ExprKind::Neg: return "-" + paren(e.operand(), strength(e.operand()) < 7);
    case ExprKind::Not: return "not " + paren(e.operand(), strength(e.operand()) < 3);
    case ExprKind::Call: {
      if (e.func() == Func::Abs) return "abs(" + py(e.operand()) + ")";
      return "math." + std::string(func_name(e.func())) + "(" + py(e.operand()) + ")";
    }
    case ExprKind::Select:
      return paren(e.child(1), strength(e.child(1)) < 1) + " if " + paren(e.child(0), strength(e.child(0)) < 1) +
             " else " + py(e.child(2));
    case ExprKind::Bin: break;
  }
  if (e.op() == BinOp::Mod) return "math.fmod(" + py(e.lhs()) + ", " + py(e.rhs()) + ")";
  int p = strength(e);
  int pl = strength(e.lhs()), pr = strength(e.rhs());
  bool left, right;
  std::string sym(op_symbol(e.op()));
  if (e.op() == BinOp::Pow) {
    sym = "**";
    left = pl <= p;   // (-x) ** 2, (a ** b) ** c
    right = pr < 7;   // the exponent may be a unary expression
  } else {
    left = pl < p || (pl == p && p == 4);
    right = pr <= p;
  }
  return paren(e.lhs(), left) + " " + sym + " " + paren(e.rhs(), right);
}

}  // namespace

std::string python_identifier(std::string_view name) {
  std::string out(name);
  if (std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end()) out += '_';
  return out;
}

std::string emit_expression(const Expr& e) { return py(e); }

std::string emit_function_text(const FunctionDef& fn) {
  std::string out = "def " + python_identifier(fn.name) + "(";
  for (std::size_t i = 0; i < fn.inputs.size(); ++i) {
    if (i) out += ", ";
    out += python_identifier(fn.inputs[i]);
  }
  out += "):\n    return " + py(fn.body) + "\n";
  return out;
}

}  // namespace modelforge::eqc
