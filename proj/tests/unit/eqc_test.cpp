#include "modelforge/eqc/emit.hpp"
#include "modelforge/eqc/evaluate.hpp"

#include "expr_gen.hpp"
#include "python_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace modelforge::eqc;
using modelforge::testing::ExprGen;
using Code = EquationError::Code;

namespace {

Code error_of(std::string_view eq) {
  try {
    parse_equation(eq);
  } catch (const EquationError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << eq;
  return Code::NoEquals;
}

std::size_t error_pos(std::string_view eq) {
  try {
    parse_equation(eq);
  } catch (const EquationError& e) {
    return e.position();
  }
  return std::string::npos;
}

Expr V(const char* n) { return Expr::var(n); }
Expr N(double v) { return Expr::num(v); }
Expr B(BinOp op, Expr l, Expr r) { return Expr::bin(op, std::move(l), std::move(r)); }

}  // namespace

TEST(Parse, SpeedOfSoundGolden) {
  auto c = parse_equation("a = sqrt [g * R * T]");
  ASSERT_EQ(c.interpretations.size(), 1u);
  const auto& fn = c.interpretations[0];
  EXPECT_EQ(fn.output, "a");
  EXPECT_EQ(fn.inputs, (std::vector<std::string>{"g", "R", "T"}));
  EXPECT_EQ(emit_function_text(fn), "def a(g, R, T):\n    return math.sqrt(g * R * T)\n");
  double v = evaluate(fn, {{"g", 1.4}, {"R", 286}, {"T", 300}});
  EXPECT_NEAR(v, std::sqrt(120120.0), 1e-9);
  EXPECT_NEAR(v, 346.5834, 1e-4);
}

TEST(Parse, SourceDrivesFunctionName) {
  EquationSource src{"aero-notes.md", 12};
  auto c = parse_equation("a = sqrt(g*R*T)", &src);
  EXPECT_EQ(c.interpretations[0].name, "aero_notes_md_L12_a");
}

TEST(Parse, ErrorKinds) {
  EXPECT_EQ(error_of("a + b"), Code::NoEquals);
  EXPECT_EQ(error_of("a = b = c"), Code::MultipleEquals);
  EXPECT_EQ(error_pos("a = b = c"), 6u);
  EXPECT_EQ(error_of("a =  "), Code::EmptySide);
  EXPECT_EQ(error_of(" = b"), Code::EmptySide);
  EXPECT_EQ(error_of("a = (b + c"), Code::UnbalancedBrackets);
  EXPECT_EQ(error_pos("a = (b + c"), 4u);
  EXPECT_EQ(error_of("a = [b + c)"), Code::UnbalancedBrackets);
  EXPECT_EQ(error_of("a = b + c)"), Code::UnbalancedBrackets);
  EXPECT_EQ(error_of("a = b $ c"), Code::UnknownToken);
  EXPECT_EQ(error_pos("a = b $ c"), 6u);
  EXPECT_EQ(error_of("a = foo(b)"), Code::UnknownToken);
  EXPECT_EQ(error_of("a = 2 b"), Code::UnexpectedToken);
  EXPECT_EQ(error_of("a = 2b"), Code::UnexpectedToken);
  EXPECT_EQ(error_of("a = sqrt b"), Code::UnexpectedToken);
  EXPECT_EQ(error_of("a = b +"), Code::UnexpectedToken);
  EXPECT_EQ(error_of("a = ()"), Code::UnexpectedToken);
  EXPECT_EQ(error_of("a = +b"), Code::UnexpectedToken);
  EXPECT_EQ(error_of("5^2 = 3^2 + 4^2"), Code::NoLhsVariable);
  EXPECT_EQ(error_of("x^2 = y"), Code::UnsolvableLhs);
  EXPECT_EQ(error_of("x + x = y"), Code::UnsolvableLhs);
  EXPECT_EQ(error_of("2 * x = y"), Code::UnsolvableLhs);
  EXPECT_EQ(error_of("x = x + 1"), Code::SelfReference);
  EXPECT_EQ(error_of("x + y = y * 2"), Code::SelfReference);
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse_expression("-x^2"), Expr::neg(B(BinOp::Pow, V("x"), N(2))));
  EXPECT_EQ(parse_expression("a^b^c"), B(BinOp::Pow, V("a"), B(BinOp::Pow, V("b"), V("c"))));
  EXPECT_EQ(parse_expression("a - b - c"), B(BinOp::Sub, B(BinOp::Sub, V("a"), V("b")), V("c")));
  EXPECT_EQ(parse_expression("a / b * c"), B(BinOp::Mul, B(BinOp::Div, V("a"), V("b")), V("c")));
  EXPECT_EQ(parse_expression("a + b * c"), B(BinOp::Add, V("a"), B(BinOp::Mul, V("b"), V("c"))));
  EXPECT_EQ(parse_expression("2^-1"), B(BinOp::Pow, N(2), Expr::neg(N(1))));
  EXPECT_EQ(parse_expression("(a + b)^2"), B(BinOp::Pow, B(BinOp::Add, V("a"), V("b")), N(2)));
  EXPECT_EQ(parse_expression("2*x^2"), B(BinOp::Mul, N(2), B(BinOp::Pow, V("x"), N(2))));
  EXPECT_EQ(parse_expression("a * -b"), B(BinOp::Mul, V("a"), Expr::neg(V("b"))));
  EXPECT_EQ(parse_expression("a - -b"), B(BinOp::Sub, V("a"), Expr::neg(V("b"))));
}

TEST(Parse, NumbersAndNames) {
  EXPECT_EQ(parse_expression(".814 * x"), B(BinOp::Mul, N(0.814), V("x")));
  EXPECT_EQ(parse_expression("2.5"), N(2.5));
  EXPECT_EQ(parse_expression("T_0 + x1"), B(BinOp::Add, V("T_0"), V("x1")));
  EXPECT_EQ(parse_expression("γ * ρ"), B(BinOp::Mul, V("γ"), V("ρ")));
}

TEST(Parse, ExponentialBase) {
  EXPECT_EQ(parse_expression("e^x"), Expr::call(Func::Exp, V("x")));
  EXPECT_EQ(parse_expression("e^-x"), Expr::call(Func::Exp, Expr::neg(V("x"))));
  EXPECT_EQ(parse_expression("e^(a+b) * c"),
            B(BinOp::Mul, Expr::call(Func::Exp, B(BinOp::Add, V("a"), V("b"))), V("c")));
  EXPECT_EQ(parse_expression("e * 2"), B(BinOp::Mul, V("e"), N(2)));
}

TEST(Parse, BracketKindsAreEquivalent) {
  auto round = parse_equation("P = rho * (R * (T + 273.15))");
  for (const char* eq : {"P = rho * [R * {T + 273.15}]", "P = rho * {R * [T + 273.15]}", "P=rho*(R*[T+273.15])"}) {
    auto c = parse_equation(eq);
    EXPECT_EQ(c.rhs, round.rhs) << eq;
  }
}

TEST(Rearrange, TwoVariableTable) {
  struct Row {
    const char* eq;
    const char* x_body;
    const char* y_body;
  };
  const Row rows[] = {
      {"x + y = R", "R - y", "R - x"},
      {"x - y = R", "R + y", "x - R"},
      {"x * y = R", "R / y", "R / x"},
      {"x / y = R", "R * y", "x / R"},
  };
  for (const auto& r : rows) {
    auto c = parse_equation(r.eq);
    ASSERT_EQ(c.interpretations.size(), 2u) << r.eq;
    EXPECT_EQ(c.interpretations[0].output, "x");
    EXPECT_EQ(c.interpretations[0].body, parse_expression(r.x_body)) << r.eq;
    EXPECT_EQ(c.interpretations[1].output, "y");
    EXPECT_EQ(c.interpretations[1].body, parse_expression(r.y_body)) << r.eq;
  }
}

TEST(Rearrange, CompoundRightSide) {
  auto c = parse_equation("a * b = c + d");
  ASSERT_EQ(c.interpretations.size(), 2u);
  EXPECT_EQ(to_infix(c.interpretations[0].body), "(c + d) / b");
  EXPECT_EQ(c.interpretations[0].inputs, (std::vector<std::string>{"c", "d", "b"}));
  EXPECT_EQ(to_infix(c.interpretations[1].body), "(c + d) / a");
}

TEST(Rearrange, PlugBackProperty) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> val(0.5, 20.0);
  ExprGen gen(11);
  gen.vars = {"p", "q", "r"};
  const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div};
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    BinOp op = ops[round % 4];
    Expr lhs = B(op, V("x"), V("y"));
    Expr rhs = gen.arith(3);
    auto fns = rearrange(lhs, rhs);
    ASSERT_EQ(fns.size(), 2u);
    Bindings env{{"x", val(rng)}, {"p", val(rng)}, {"q", val(rng)}, {"r", val(rng)}};
    double R;
    try {
      R = evaluate(rhs, env);
    } catch (const EvalError&) {
      continue;
    }
    // choose y so that x op y == R holds, then solve back for x and y
    double x = env["x"], y;
    switch (op) {
      case BinOp::Add: y = R - x; break;
      case BinOp::Sub: y = x - R; break;
      case BinOp::Mul: y = R / x; break;
      default:
        if (R == 0) continue;
        y = x / R;
    }
    env["y"] = y;
    for (const auto& fn : fns) {
      validate(fn);
      double got;
      try {
        got = evaluate(fn, env);
      } catch (const EvalError&) {
        continue;
      }
      double want = env[fn.output];
      // rearranging subtracts R back out, so error scales with |R|
      double scale = std::max({1.0, std::fabs(R), std::fabs(x), std::fabs(y)});
      EXPECT_NEAR(got, want, 1e-9 * scale) << to_infix(fn.body);
      ++checked;
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(Expr, InfixRoundTripProperty) {
  ExprGen gen(3);
  for (int i = 0; i < 500; ++i) {
    Expr e = gen.arith(5);
    std::string text = to_infix(e);
    EXPECT_EQ(parse_expression(text), e) << text;
  }
}

TEST(Expr, SexprRoundTripProperty) {
  ExprGen gen(5);
  gen.text_only = false;
  for (int i = 0; i < 500; ++i) {
    Expr e = gen.arith(5);
    EXPECT_EQ(from_sexpr(to_sexpr(e)), e) << to_sexpr(e);
  }
  EXPECT_EQ(from_sexpr("(if (< a 1) (neg b) (sqrt -2.5))"),
            Expr::select(B(BinOp::Lt, V("a"), N(1)), Expr::neg(V("b")), Expr::call(Func::Sqrt, N(-2.5))));
  EXPECT_THROW(from_sexpr("(+ a)"), std::invalid_argument);
  EXPECT_THROW(from_sexpr("(+ a b"), std::invalid_argument);
}

TEST(Expr, FreeVariablesFirstOccurrence) {
  auto e = parse_expression("b * a + sqrt(b) / c");
  EXPECT_EQ(free_variables(e), (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_TRUE(mentions(e, "c"));
  EXPECT_FALSE(mentions(e, "d"));
  auto s = substitute(e, {{"b", N(2)}});
  EXPECT_EQ(free_variables(s), (std::vector<std::string>{"a", "c"}));
}

TEST(Evaluate, DomainErrors) {
  auto code = [](const char* text, Bindings b) {
    try {
      evaluate(parse_expression(text), b);
    } catch (const EvalError& e) {
      return e.code();
    }
    return EvalError::Code{-1};
  };
  EXPECT_EQ(code("a / b", {{"a", 1}, {"b", 0}}), EvalError::Code::DomainError);
  EXPECT_EQ(code("sqrt(a)", {{"a", -1}}), EvalError::Code::DomainError);
  EXPECT_EQ(code("log(a)", {{"a", 0}}), EvalError::Code::DomainError);
  EXPECT_EQ(code("exp(a)", {{"a", 1000}}), EvalError::Code::DomainError);
  EXPECT_EQ(code("a ^ 0.5", {{"a", -4}}), EvalError::Code::DomainError);
  EXPECT_EQ(code("a + b", {{"a", 1}}), EvalError::Code::MissingBinding);

  FunctionDef fn{"f", {"a"}, "y", parse_expression("a * 2")};
  EXPECT_THROW(evaluate(fn, {{"a", INFINITY}}), EvalError);
  EXPECT_DOUBLE_EQ(evaluate(fn, {{"a", 4}}), 8.0);
}

TEST(Evaluate, SelectIsLazy) {
  Expr e = Expr::select(B(BinOp::Gt, V("x"), N(0)), Expr::call(Func::Sqrt, V("x")), N(-1));
  EXPECT_DOUBLE_EQ(evaluate(e, {{"x", -9}}), -1.0);
  EXPECT_DOUBLE_EQ(evaluate(e, {{"x", 9}}), 3.0);
}

TEST(Validate, Invariants) {
  EXPECT_NO_THROW(validate({"f", {"a", "b"}, "y", parse_expression("a + b")}));
  EXPECT_THROW(validate({"f", {"a", "a"}, "y", parse_expression("a")}), std::invalid_argument);
  EXPECT_THROW(validate({"f", {"a"}, "a", parse_expression("a")}), std::invalid_argument);
  EXPECT_THROW(validate({"f", {"a"}, "y", parse_expression("a + b")}), std::invalid_argument);
}

TEST(Emit, Formatting) {
  EXPECT_EQ(emit_expression(parse_expression("-x^2")), "-x ** 2");
  EXPECT_EQ(emit_expression(parse_expression("(-x)^2")), "(-x) ** 2");
  EXPECT_EQ(emit_expression(parse_expression("(a^b)^c")), "(a ** b) ** c");
  EXPECT_EQ(emit_expression(parse_expression("a^b^c")), "a ** b ** c");
  EXPECT_EQ(emit_expression(parse_expression("a - (b - c)")), "a - (b - c)");
  EXPECT_EQ(emit_expression(parse_expression("a / (b * c)")), "a / (b * c)");
  EXPECT_EQ(emit_expression(parse_expression("2 ^ -x")), "2 ** -x");
  EXPECT_EQ(emit_expression(parse_expression("abs(e^x)")), "abs(math.exp(x))");
  EXPECT_EQ(emit_expression(Expr::select(B(BinOp::Lt, V("a"), V("b")), V("a"), V("b"))), "a if a < b else b");
  EXPECT_EQ(emit_expression(B(BinOp::Mul, Expr::select(V("c"), V("a"), V("b")), N(2))), "(a if c else b) * 2");
  EXPECT_EQ(emit_expression(B(BinOp::Mod, V("a"), N(3))), "math.fmod(a, 3)");
  EXPECT_EQ(emit_expression(B(BinOp::Lt, B(BinOp::Lt, V("a"), V("b")), V("c"))), "(a < b) < c");
  EXPECT_EQ(python_identifier("lambda"), "lambda_");
  EXPECT_EQ(python_identifier("math"), "math_");
  FunctionDef fn{"in", {"lambda", "x"}, "in", parse_expression("lambda * x")};
  EXPECT_EQ(emit_function_text(fn), "def in_(lambda_, x):\n    return lambda_ * x\n");
}

// Emitted functions run under a real Python interpreter and agree with the
// in-process evaluator, including on which inputs fail.
TEST(Emit, AgreesWithPythonProperty) {
  if (!modelforge::testing::python_available()) GTEST_SKIP() << "python3 not found";
  ExprGen gen(99);
  gen.text_only = false;
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> val(-3.0, 6.0);

  // abs() is the one builtin that turns a complex intermediate back into a
  // real; the evaluator treats those as domain errors, so the harness does too.
  std::string program =
      "import math\n"
      "_abs = abs\n"
      "def abs(v):\n"
      "    if isinstance(v, complex):\n"
      "        raise ValueError('complex')\n"
      "    return _abs(v)\n";
  std::vector<std::string> expected, sources;
  for (int i = 0; i < 400; ++i) {
    FunctionDef fn;
    fn.name = "f" + std::to_string(i);
    fn.body = gen.arith(4);
    fn.output = "y";
    fn.inputs = free_variables(fn.body);
    program += emit_function_text(fn);
    sources.push_back(emit_function_text(fn));
    Bindings b;
    std::string args;
    for (const auto& in : fn.inputs) {
      double v = std::round(val(rng) * 8) / 8;
      b[in] = v;
      if (!args.empty()) args += ", ";
      args += std::to_string(v);
    }
    program += modelforge::testing::python_probe(fn.name + "(" + args + ")");
    sources.back() += "# " + args;
    try {
      double r = evaluate(fn, b);
      expected.push_back(std::to_string(r));
    } catch (const EvalError&) {
      expected.push_back("ERR");
    }
  }
  auto lines = modelforge::testing::run_python(program);
  ASSERT_EQ(lines.size(), expected.size()) << (lines.empty() ? "" : lines.back());
  int agreed = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (expected[i] == "ERR" || lines[i] == "ERR") {
      EXPECT_EQ(lines[i], expected[i]) << sources[i];
      continue;
    }
    double want = std::stod(expected[i]), got = std::stod(lines[i]);
    EXPECT_NEAR(got, want, 1e-6 * std::max(1.0, std::fabs(want))) << sources[i];
    ++agreed;
  }
  EXPECT_GT(agreed, 100);
}
