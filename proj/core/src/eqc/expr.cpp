#include "modelforge/eqc/expr.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace modelforge::eqc {

struct Expr::Node {
  ExprKind kind = ExprKind::Num;
  double value = 0.0;
  std::string name;
  BinOp op = BinOp::Add;
  Func fn = Func::Sqrt;
  std::vector<Expr> kids;
};

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// Binding strength for infix rendering; higher binds tighter.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Select: return 0;
    case ExprKind::Not: return 3;
    case ExprKind::Neg: return 7;
    case ExprKind::Num: return e.value() < 0 ? 7 : 9;
    case ExprKind::Var:
    case ExprKind::Call: return 9;
    case ExprKind::Bin:
      switch (e.op()) {
        case BinOp::Or: return 1;
        case BinOp::And: return 2;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge:
        case BinOp::Eq:
        case BinOp::Ne: return 4;
        case BinOp::Add:
        case BinOp::Sub: return 5;
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Mod: return 6;
        case BinOp::Pow: return 8;
      }
  }
  return 9;
}

std::string infix(const Expr& e);

std::string wrap(const Expr& e, bool parens) { return parens ? "(" + infix(e) + ")" : infix(e); }

std::string infix(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Num: return format_number(e.value());
    case ExprKind::Var: return e.name();
    case ExprKind::Neg: return "-" + wrap(e.operand(), precedence(e.operand()) < 7);
    case ExprKind::Not: return "!" + wrap(e.operand(), precedence(e.operand()) < 7);
    case ExprKind::Call: return std::string(func_name(e.func())) + "(" + infix(e.operand()) + ")";
    case ExprKind::Select:
      return "if(" + infix(e.child(0)) + ", " + infix(e.child(1)) + ", " + infix(e.child(2)) + ")";
    case ExprKind::Bin: {
      int p = precedence(e);
      int pl = precedence(e.lhs()), pr = precedence(e.rhs());
      bool pow = e.op() == BinOp::Pow;
      bool cmp = p == 4;
      bool left = pl < p || (pl == p && (pow || cmp));
      bool right = pr < p || (pr == p && !pow);
      std::string sym(op_symbol(e.op()));
      if (e.op() == BinOp::And) sym = "&&";
      if (e.op() == BinOp::Or) sym = "||";
      return wrap(e.lhs(), left) + " " + sym + " " + wrap(e.rhs(), right);
    }
  }
  return {};
}

void collect_free(const Expr& e, std::vector<std::string>& out) {
  if (e.kind() == ExprKind::Var) {
    if (std::find(out.begin(), out.end(), e.name()) == out.end()) out.push_back(e.name());
    return;
  }
  for (std::size_t i = 0; i < e.arity(); ++i) collect_free(e.child(i), out);
}

class SexprReader {
public:
  explicit SexprReader(std::string_view s) : s_(s) {}

  Expr read() {
    Expr e = node();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("sexpr: " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  std::string_view atom() {
    skip();
    auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '(' && s_[pos_] != ')') ++pos_;
    if (start == pos_) fail("expected atom");
    return s_.substr(start, pos_ - start);
  }
  Expr node() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] != '(') {
      auto a = atom();
      double v{};
      auto [p, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
      if (ec == std::errc{} && p == a.data() + a.size()) return Expr::num(v);
      return Expr::var(std::string(a));
    }
    ++pos_;
    auto head = atom();
    std::vector<Expr> kids;
    skip();
    while (pos_ < s_.size() && s_[pos_] != ')') {
      kids.push_back(node());
      skip();
    }
    if (pos_ >= s_.size()) fail("unterminated list");
    ++pos_;
    auto need = [&](std::size_t n) {
      if (kids.size() != n) fail("wrong arity for " + std::string(head));
    };
    if (head == "neg") return need(1), Expr::neg(kids[0]);
    if (head == "not") return need(1), Expr::logical_not(kids[0]);
    if (head == "if") return need(3), Expr::select(kids[0], kids[1], kids[2]);
    if (auto f = func_from_name(head)) return need(1), Expr::call(*f, kids[0]);
    for (BinOp op : {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow, BinOp::Mod, BinOp::Lt, BinOp::Le,
                     BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne, BinOp::And, BinOp::Or}) {
      if (head == op_symbol(op)) return need(2), Expr::bin(op, kids[0], kids[1]);
    }
    fail("unknown head " + std::string(head));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view op_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Pow: return "^";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Sqrt: return "sqrt";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Abs: return "abs";
  }
  return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
  for (Func f : {Func::Sqrt, Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Tan, Func::Abs}) {
    if (func_name(f) == name) return f;
  }
  return std::nullopt;
}

Expr::Expr() : node_(std::make_shared<const Node>()) {}

Expr Expr::num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Num;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Var;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::neg(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Neg;
  n->kids = {std::move(operand)};
  return Expr(std::move(n));
}

Expr Expr::logical_not(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Not;
  n->kids = {std::move(operand)};
  return Expr(std::move(n));
}

Expr Expr::bin(BinOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Bin;
  n->op = op;
  n->kids = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Call;
  n->fn = f;
  n->kids = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::select(Expr cond, Expr then_value, Expr else_value) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Select;
  n->kids = {std::move(cond), std::move(then_value), std::move(else_value)};
  return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
BinOp Expr::op() const { return node_->op; }
Func Expr::func() const { return node_->fn; }
const Expr& Expr::child(std::size_t i) const { return node_->kids.at(i); }
std::size_t Expr::arity() const { return node_->kids.size(); }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Num: return a.value == b.value;
    case ExprKind::Var: return a.name == b.name;
    case ExprKind::Bin:
      if (a.op != b.op) return false;
      break;
    case ExprKind::Call:
      if (a.fn != b.fn) return false;
      break;
    default: break;
  }
  return a.kids == b.kids;
}

std::vector<std::string> free_variables(const Expr& e) {
  std::vector<std::string> out;
  collect_free(e, out);
  return out;
}

bool mentions(const Expr& e, std::string_view var) {
  if (e.kind() == ExprKind::Var) return e.name() == var;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (mentions(e.child(i), var)) return true;
  }
  return false;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& env) {
  switch (e.kind()) {
    case ExprKind::Num: return e;
    case ExprKind::Var: {
      auto it = env.find(e.name());
      return it == env.end() ? e : it->second;
    }
    case ExprKind::Neg: return Expr::neg(substitute(e.operand(), env));
    case ExprKind::Not: return Expr::logical_not(substitute(e.operand(), env));
    case ExprKind::Call: return Expr::call(e.func(), substitute(e.operand(), env));
    case ExprKind::Bin: return Expr::bin(e.op(), substitute(e.lhs(), env), substitute(e.rhs(), env));
    case ExprKind::Select:
      return Expr::select(substitute(e.child(0), env), substitute(e.child(1), env), substitute(e.child(2), env));
  }
  return e;
}

std::string to_infix(const Expr& e) { return infix(e); }

std::string to_sexpr(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Num: return format_number(e.value());
    case ExprKind::Var: return e.name();
    case ExprKind::Neg: return "(neg " + to_sexpr(e.operand()) + ")";
    case ExprKind::Not: return "(not " + to_sexpr(e.operand()) + ")";
    case ExprKind::Call: return "(" + std::string(func_name(e.func())) + " " + to_sexpr(e.operand()) + ")";
    case ExprKind::Bin:
      return "(" + std::string(op_symbol(e.op())) + " " + to_sexpr(e.lhs()) + " " + to_sexpr(e.rhs()) + ")";
    case ExprKind::Select:
      return "(if " + to_sexpr(e.child(0)) + " " + to_sexpr(e.child(1)) + " " + to_sexpr(e.child(2)) + ")";
  }
  return {};
}

Expr from_sexpr(std::string_view text) { return SexprReader(text).read(); }

}  // namespace modelforge::eqc
