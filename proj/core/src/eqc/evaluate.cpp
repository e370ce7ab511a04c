#include "modelforge/eqc/evaluate.hpp"

#include <cmath>

namespace modelforge::eqc {

namespace {

[[noreturn]] void domain(const std::string& op, const std::string& why) {
  throw EvalError(EvalError::Code::DomainError, op, op + ": " + why);
}

double finite(double v, const char* op) {
  if (!std::isfinite(v)) domain(op, "result is not finite");
  return v;
}

double apply(Func f, double x) {
  switch (f) {
    case Func::Sqrt:
      if (x < 0) domain("sqrt", "negative argument");
      return std::sqrt(x);
    case Func::Exp: return finite(std::exp(x), "exp");
    case Func::Log:
      if (x <= 0) domain("log", "non-positive argument");
      return std::log(x);
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan: return finite(std::tan(x), "tan");
    case Func::Abs: return std::fabs(x);
  }
  return 0.0;
}

double eval(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case ExprKind::Num: return e.value();
    case ExprKind::Var: {
      auto it = b.find(e.name());
      if (it == b.end())
        throw EvalError(EvalError::Code::MissingBinding, e.name(), "no binding for " + e.name());
      return it->second;
    }
    case ExprKind::Neg: return -eval(e.operand(), b);
    case ExprKind::Not: return eval(e.operand(), b) == 0.0 ? 1.0 : 0.0;
    case ExprKind::Call: return apply(e.func(), eval(e.operand(), b));
    case ExprKind::Select: return eval(e.child(0), b) != 0.0 ? eval(e.child(1), b) : eval(e.child(2), b);
    case ExprKind::Bin: break;
  }
  if (e.op() == BinOp::And) return eval(e.lhs(), b) != 0.0 && eval(e.rhs(), b) != 0.0 ? 1.0 : 0.0;
  if (e.op() == BinOp::Or) return eval(e.lhs(), b) != 0.0 || eval(e.rhs(), b) != 0.0 ? 1.0 : 0.0;
  double l = eval(e.lhs(), b);
  double r = eval(e.rhs(), b);
  switch (e.op()) {
    case BinOp::Add: return finite(l + r, "+");
    case BinOp::Sub: return finite(l - r, "-");
    case BinOp::Mul: return finite(l * r, "*");
    case BinOp::Div:
      if (r == 0.0) domain("/", "division by zero");
      return finite(l / r, "/");
    case BinOp::Mod:
      if (r == 0.0) domain("%", "modulo by zero");
      return std::fmod(l, r);
    case BinOp::Pow:
      if (l == 0.0 && r < 0) domain("^", "zero to a negative power");
      return finite(std::pow(l, r), "^");
    case BinOp::Lt: return l < r;
    case BinOp::Le: return l <= r;
    case BinOp::Gt: return l > r;
    case BinOp::Ge: return l >= r;
    case BinOp::Eq: return l == r;
    case BinOp::Ne: return l != r;
    default: return 0.0;
  }
}

}  // namespace

double evaluate(const Expr& e, const Bindings& bindings) { return eval(e, bindings); }

double evaluate(const FunctionDef& fn, const Bindings& bindings) {
  for (const auto& in : fn.inputs) {
    auto it = bindings.find(in);
    if (it == bindings.end()) throw EvalError(EvalError::Code::MissingBinding, in, "no binding for " + in);
    if (!std::isfinite(it->second)) domain(in, "input is not finite");
  }
  return eval(fn.body, bindings);
}

}  // namespace modelforge::eqc
