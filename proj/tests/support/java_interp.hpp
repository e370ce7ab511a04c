#pragma once

// Direct tree-walking interpreter for the Java subset, all values as double.
// Serves as the reference the translated functions are checked against.

#include "modelforge/codex/ast.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace modelforge::testing {

using codex::ClassDecl;
using codex::JExpr;
using codex::JStmt;
using codex::MethodDecl;

class JavaInterp {
public:
  explicit JavaInterp(const ClassDecl& cls) : cls_(cls) {}

  std::map<std::string, double> fields;

  /// Runs `m`; returns its value (NaN for void methods).
  double call(const MethodDecl& m, const std::vector<double>& args) {
    if (++depth_ > 50) throw std::runtime_error("recursion");
    Frame f;
    for (std::size_t i = 0; i < m.params.size(); ++i) f.locals[m.params[i].name] = args.at(i);
    double out = NAN;
    try {
      block(m.body, f);
    } catch (const Return& r) {
      out = r.value;
    }
    --depth_;
    return out;
  }

  const MethodDecl& method(const std::string& name, std::size_t arity) const {
    for (const auto& m : cls_.methods) {
      if (m.name == name && m.params.size() == arity) return m;
    }
    throw std::runtime_error("no method " + name);
  }

private:
  struct Frame {
    std::map<std::string, double> locals;
  };
  struct Return {
    double value;
  };
  struct Break {};

  void block(const std::vector<JStmt>& body, Frame& f) {
    for (const auto& s : body) stmt(s, f);
  }

  double& slot(const std::string& name, bool self, Frame& f) {
    if (!self) {
      if (auto it = f.locals.find(name); it != f.locals.end()) return it->second;
    }
    return fields[name];
  }

  void stmt(const JStmt& s, Frame& f) {
    using K = JStmt::Kind;
    switch (s.kind) {
      case K::VarDecl: f.locals[s.target] = s.expr ? eval(*s.expr, f) : NAN; break;
      case K::Assign: {
        double v = eval(*s.expr, f);
        double& dst = slot(s.target, s.target_this, f);
        if (s.op == "=") dst = v;
        else if (s.op == "+=") dst += v;
        else if (s.op == "-=") dst -= v;
        else if (s.op == "*=") dst *= v;
        else if (s.op == "/=") dst /= v;
        else if (s.op == "%=") dst = std::fmod(dst, v);
        break;
      }
      case K::If:
        if (eval(*s.expr, f) != 0) block(s.body, f);
        else block(s.else_body, f);
        break;
      case K::While:
        try {
          while (eval(*s.expr, f) != 0) block(s.body, f);
        } catch (const Break&) {
        }
        break;
      case K::For:
        block(s.init, f);
        try {
          while (!s.expr || eval(*s.expr, f) != 0) {
            block(s.body, f);
            block(s.update, f);
          }
        } catch (const Break&) {
        }
        break;
      case K::Call: eval(*s.expr, f); break;
      case K::Return: throw Return{s.expr ? eval(*s.expr, f) : NAN};
      case K::Block: block(s.body, f); break;
      case K::Break: throw Break{};
      case K::Continue: throw std::runtime_error("continue");
      case K::Empty: break;
    }
  }

  double eval(const JExpr& e, Frame& f) {
    using K = JExpr::Kind;
    switch (e.kind) {
      case K::Number: return std::stod(e.text);
      case K::Bool: return e.text == "true" ? 1 : 0;
      case K::Name:
        if (e.text == "Math.PI") return M_PI;
        if (e.text == "Math.E") return M_E;
        return slot(e.text, e.qualified_this, f);
      case K::Unary: {
        double v = eval(e.args[0], f);
        return e.text == "-" ? -v : e.text == "!" ? (v == 0 ? 1 : 0) : v;
      }
      case K::Cast: return eval(e.args[0], f);
      case K::Ternary: return eval(e.args[0], f) != 0 ? eval(e.args[1], f) : eval(e.args[2], f);
      case K::Binary: {
        const std::string& op = e.text;
        if (op == "&&") return eval(e.args[0], f) != 0 && eval(e.args[1], f) != 0;
        if (op == "||") return eval(e.args[0], f) != 0 || eval(e.args[1], f) != 0;
        double a = eval(e.args[0], f), b = eval(e.args[1], f);
        if (op == "+") return a + b;
        if (op == "-") return a - b;
        if (op == "*") return a * b;
        if (op == "/") return a / b;
        if (op == "%") return std::fmod(a, b);
        if (op == "<") return a < b;
        if (op == "<=") return a <= b;
        if (op == ">") return a > b;
        if (op == ">=") return a >= b;
        if (op == "==") return a == b;
        if (op == "!=") return a != b;
        throw std::runtime_error("operator " + op);
      }
      case K::Call: {
        std::vector<double> args;
        for (const auto& a : e.args) args.push_back(eval(a, f));
        auto [qual, name] = codex::split_callee(e.text);
        if (qual == "Math") {
          if (name == "sqrt") return std::sqrt(args[0]);
          if (name == "exp") return std::exp(args[0]);
          if (name == "log") return std::log(args[0]);
          if (name == "sin") return std::sin(args[0]);
          if (name == "cos") return std::cos(args[0]);
          if (name == "tan") return std::tan(args[0]);
          if (name == "abs") return std::fabs(args[0]);
          if (name == "pow") return std::pow(args[0], args[1]);
          if (name == "min") return args[0] <= args[1] ? args[0] : args[1];
          if (name == "max") return args[0] >= args[1] ? args[0] : args[1];
        }
        if (qual.empty() || e.qualified_this) return call(method(name, args.size()), args);
        throw std::runtime_error("call " + e.text);
      }
      default: throw std::runtime_error("expression kind");
    }
  }

  const ClassDecl& cls_;
  int depth_ = 0;
};

}  // namespace modelforge::testing
