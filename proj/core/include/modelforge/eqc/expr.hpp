#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modelforge::eqc {

enum class BinOp { Add, Sub, Mul, Div, Pow, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class Func { Sqrt, Exp, Log, Sin, Cos, Tan, Abs };
enum class ExprKind { Num, Var, Neg, Not, Bin, Call, Select };

std::string_view op_symbol(BinOp op);
std::string_view func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

/// Immutable expression tree with value semantics. Copies share structure.
///
/// Text equations only ever produce Num, Var, Neg, Bin (+ - * / ^) and Call;
/// the remaining node kinds exist so translated code (conditionals,
/// comparisons, `%`) fits the same IR.
class Expr {
public:
  Expr();  // Num(0)

  static Expr num(double v);
  static Expr var(std::string name);
  static Expr neg(Expr operand);
  static Expr logical_not(Expr operand);
  static Expr bin(BinOp op, Expr lhs, Expr rhs);
  static Expr call(Func f, Expr arg);
  static Expr select(Expr cond, Expr then_value, Expr else_value);

  ExprKind kind() const;
  double value() const;
  const std::string& name() const;
  BinOp op() const;
  Func func() const;
  const Expr& child(std::size_t i) const;
  std::size_t arity() const;

  // Convenience accessors for the common shapes.
  const Expr& operand() const { return child(0); }
  const Expr& lhs() const { return child(0); }
  const Expr& rhs() const { return child(1); }

  bool is_var() const { return kind() == ExprKind::Var; }

  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Left-to-right first-occurrence order, duplicates removed.
std::vector<std::string> free_variables(const Expr& e);

bool mentions(const Expr& e, std::string_view var);

/// Replaces free variables by the mapped expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& env);

/// Conventional infix rendering (`^` for power), used for display and for
/// rendering interpretations as equations: "(c + d) / b".
std::string to_infix(const Expr& e);

/// Exact, lossless prefix serialization: `(* (sqrt g) 2)`.
std::string to_sexpr(const Expr& e);
Expr from_sexpr(std::string_view text);

}  // namespace modelforge::eqc
