#pragma once

// Random expression trees for property tests.

#include "modelforge/eqc/expr.hpp"

#include <random>

namespace modelforge::testing {

using eqc::BinOp;
using eqc::Expr;
using eqc::Func;

struct ExprGen {
  std::mt19937 rng;
  std::vector<std::string> vars{"a", "b", "c", "x1", "T_0", "γ"};
  bool text_only = true;  // only what text equations can spell

  explicit ExprGen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Expr leaf() {
    if (pick(3) == 0) {
      static const double kNums[] = {0.5, 1, 2, 3.25, 10, 0.814, 4};
      return Expr::num(kNums[pick(7)]);
    }
    return Expr::var(vars[pick(static_cast<int>(vars.size()))]);
  }

  Expr comparison(int depth) {
    static const BinOp kCmp[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne};
    Expr c = Expr::bin(kCmp[pick(6)], arith(depth - 1), arith(depth - 1));
    if (pick(4) == 0) return Expr::logical_not(c);
    if (pick(4) == 0) return Expr::bin(pick(2) ? BinOp::And : BinOp::Or, c, comparison(depth - 1));
    return c;
  }

  Expr arith(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    int k = pick(text_only ? 8 : 10);
    static const BinOp kOps[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow};
    static const Func kFns[] = {Func::Sqrt, Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Tan, Func::Abs};
    if (k < 5) return Expr::bin(kOps[k], arith(depth - 1), arith(depth - 1));
    if (k == 5) return Expr::neg(arith(depth - 1));
    if (k < 8) return Expr::call(kFns[pick(7)], arith(depth - 1));
    if (k == 8) return Expr::bin(BinOp::Mod, arith(depth - 1), arith(depth - 1));
    return Expr::select(comparison(depth - 1), arith(depth - 1), arith(depth - 1));
  }
};

}  // namespace modelforge::testing
