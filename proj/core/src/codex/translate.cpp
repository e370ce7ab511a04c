#include "modelforge/codex/translate.hpp"
#include "modelforge/codex/ast.hpp"
#include "modelforge/eqc/emit.hpp"
#include "modelforge/kg/vocab.hpp"

#include <algorithm>
#include <map>

namespace modelforge::codex {

using eqc::BinOp;
using eqc::Expr;
using eqc::Func;
using kg::Iri;
using kg::Literal;
namespace cem = kg::vocab::cem;
namespace rdf = kg::vocab::rdf;

namespace {

std::string lexical(const kg::Graph& g, const Iri& s, const Iri& p) {
  auto o = g.object(s, p);
  if (!o || is_iri(*o)) return {};
  return std::get<Literal>(*o).lexical;
}

std::int64_t integer(const kg::Graph& g, const Iri& s, const Iri& p) {
  auto o = g.object(s, p);
  if (!o || is_iri(*o) || !std::get<Literal>(*o).is_numeric()) return 0;
  return std::get<Literal>(*o).as_int();
}

struct Env {
  std::map<std::string, Expr, std::less<>> vals;  // locals/params by name, fields as "this.<name>"
  std::set<std::string, std::less<>> locals;
};

struct Outcome {
  std::optional<Expr> ret;
  Env env;
};

std::string field_key(std::string_view name) { return "this." + std::string(name); }

struct Sibling {
  Iri iri;
  std::string name;
  std::size_t arity = 0;
  std::string serialization;
  int begins = 0;
};

class Translator {
public:
  Translator(const kg::Graph& g, const Iri& cls) : g_(g) {
    for (const auto& s : g.subjects(cem::containedIn, cls)) {
      if (g.contains({s, rdf::type, cem::Method})) {
        Sibling sib;
        sib.iri = s;
        sib.name = lexical(g, s, cem::name);
        sib.arity = g.objects(s, cem::arguments).size();
        sib.serialization = lexical(g, s, cem::serialization);
        sib.begins = static_cast<int>(integer(g, s, cem::beginsAt));
        siblings_.push_back(std::move(sib));
      } else if (lexical(g, s, cem::scope) == "field") {
        fields_.insert(lexical(g, s, cem::name));
      }
    }
  }

  // Runs `m` from the start with parameters bound to `args` and the given field state.
  Outcome run(const MethodDecl& m, int line_base, const std::vector<Expr>& args, const Env& fields) {
    if (m.params.size() != args.size())
      unsupported(m.span.begin_line, "call with " + std::to_string(args.size()) + " arguments to " + m.name);
    Env env;
    for (const auto& [k, v] : fields.vals) {
      if (k.rfind("this.", 0) == 0) env.vals.emplace(k, v);
    }
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      env.locals.insert(m.params[i].name);
      env.vals.insert_or_assign(m.params[i].name, args[i]);
    }
    int saved = line_base_;
    line_base_ = line_base;
    std::vector<const JStmt*> work;
    for (const auto& s : m.body) work.push_back(&s);
    Outcome out = exec(std::move(work), std::move(env));
    line_base_ = saved;
    return out;
  }

private:
  [[noreturn]] void unsupported(int line, const std::string& what) const {
    int abs = line_base_ + line - 1;
    throw CodexError(CodexError::Code::UnsupportedConstruct, "line " + std::to_string(abs) + ": " + what, abs, what);
  }

  Outcome exec(std::vector<const JStmt*> work, Env env) {
    using K = JStmt::Kind;
    for (std::size_t i = 0; i < work.size(); ++i) {
      const JStmt& s = *work[i];
      int line = s.span.begin_line;
      switch (s.kind) {
        case K::Empty: break;
        case K::Block: {
          std::vector<const JStmt*> next;
          for (const auto& c : s.body) next.push_back(&c);
          next.insert(next.end(), work.begin() + static_cast<long>(i) + 1, work.end());
          return exec(std::move(next), std::move(env));
        }
        case K::VarDecl:
          env.locals.insert(s.target);
          if (s.expr) {
            env.vals.insert_or_assign(s.target, expr(*s.expr, env));
          } else {
            env.vals.erase(s.target);
          }
          break;
        case K::Assign: {
          if (s.target.find('.') != std::string::npos) unsupported(line, "assignment to " + s.target);
          std::string key = (!s.target_this && env.locals.count(s.target)) ? s.target : field_key(s.target);
          Expr rhs = expr(*s.expr, env);
          if (s.op != "=") {
            Expr cur = name(s.target, s.target_this, env, line);
            BinOp op = s.op[0] == '+' ? BinOp::Add
                       : s.op[0] == '-' ? BinOp::Sub
                       : s.op[0] == '*' ? BinOp::Mul
                       : s.op[0] == '/' ? BinOp::Div
                       : s.op[0] == '%' ? BinOp::Mod
                                        : (unsupported(line, "operator " + s.op), BinOp::Add);
            rhs = Expr::bin(op, cur, rhs);
          }
          env.vals.insert_or_assign(key, rhs);
          break;
        }
        case K::If: {
          Expr cond = expr(*s.expr, env);
          std::vector<const JStmt*> a, b;
          for (const auto& c : s.body) a.push_back(&c);
          for (const auto& c : s.else_body) b.push_back(&c);
          a.insert(a.end(), work.begin() + static_cast<long>(i) + 1, work.end());
          b.insert(b.end(), work.begin() + static_cast<long>(i) + 1, work.end());
          Outcome x = exec(std::move(a), env);
          Outcome y = exec(std::move(b), std::move(env));
          return merge(cond, std::move(x), std::move(y), line);
        }
        case K::While:
        case K::For: unsupported(line, "loop");
        case K::Break:
        case K::Continue: unsupported(line, "loop control");
        case K::Call: {
          if (s.expr->kind == JExpr::Kind::Call && s.expr->text.rfind("System.out.", 0) == 0) break;
          unsupported(line, "call statement " + s.expr->text);
        }
        case K::Return:
          if (s.expr) return {expr(*s.expr, env), std::move(env)};
          return {std::nullopt, std::move(env)};
      }
    }
    return {std::nullopt, std::move(env)};
  }

  Outcome merge(const Expr& cond, Outcome a, Outcome b, int line) {
    Outcome out;
    if (a.ret && b.ret) {
      out.ret = *a.ret == *b.ret ? *a.ret : Expr::select(cond, *a.ret, *b.ret);
    } else if (a.ret || b.ret) {
      unsupported(line, "branch that returns on only one path");
    }
    std::set<std::string> keys;
    for (const auto& [k, v] : a.env.vals) keys.insert(k);
    for (const auto& [k, v] : b.env.vals) keys.insert(k);
    for (const auto& k : keys) {
      if (k.rfind("this.", 0) != 0) continue;  // locals are dead once both paths have run to the end
      Expr initial = Expr::var(k.substr(5));
      auto ia = a.env.vals.find(k);
      auto ib = b.env.vals.find(k);
      Expr va = ia == a.env.vals.end() ? initial : ia->second;
      Expr vb = ib == b.env.vals.end() ? initial : ib->second;
      out.env.vals.emplace(k, va == vb ? va : Expr::select(cond, va, vb));
    }
    return out;
  }

  Expr name(const std::string& n, bool self, const Env& env, int line) {
    if (!self && env.locals.count(n)) {
      auto it = env.vals.find(n);
      if (it == env.vals.end()) unsupported(line, "read of " + n + " before it is assigned on every path");
      return it->second;
    }
    if (!self && n == "Math.PI") return Expr::num(3.141592653589793);
    if (!self && n == "Math.E") return Expr::num(2.718281828459045);
    if (n.find('.') != std::string::npos) unsupported(line, "qualified name " + n);
    auto it = env.vals.find(field_key(n));
    if (it != env.vals.end()) return it->second;
    return Expr::var(n);
  }

  Expr expr(const JExpr& e, const Env& env) {
    using K = JExpr::Kind;
    int line = e.span.begin_line;
    switch (e.kind) {
      case K::Number: return Expr::num(std::stod(e.text));
      case K::Bool: return Expr::num(e.text == "true" ? 1.0 : 0.0);
      case K::String: unsupported(line, "string value");
      case K::New: unsupported(line, "object creation");
      case K::Name: return name(e.text, e.qualified_this, env, line);
      case K::Cast:
        if (e.text == "double" || e.text == "float") return expr(e.args[0], env);
        unsupported(line, "cast to " + e.text);
      case K::Unary: {
        Expr x = expr(e.args[0], env);
        if (e.text == "-") return Expr::neg(x);
        if (e.text == "!") return Expr::logical_not(x);
        return x;
      }
      case K::Ternary:
        return Expr::select(expr(e.args[0], env), expr(e.args[1], env), expr(e.args[2], env));
      case K::Binary: {
        static const std::map<std::string, BinOp, std::less<>> kOps = {
            {"+", BinOp::Add}, {"-", BinOp::Sub}, {"*", BinOp::Mul}, {"/", BinOp::Div}, {"%", BinOp::Mod},
            {"<", BinOp::Lt},  {"<=", BinOp::Le}, {">", BinOp::Gt},  {">=", BinOp::Ge}, {"==", BinOp::Eq},
            {"!=", BinOp::Ne}, {"&&", BinOp::And}, {"||", BinOp::Or},
        };
        auto it = kOps.find(e.text);
        if (it == kOps.end()) unsupported(line, "operator " + e.text);
        return Expr::bin(it->second, expr(e.args[0], env), expr(e.args[1], env));
      }
      case K::Call: return call(e, env);
    }
    unsupported(line, "expression");
  }

  Expr call(const JExpr& e, const Env& env) {
    int line = e.span.begin_line;
    auto [qual, fn] = split_callee(e.text);
    std::vector<Expr> args;
    for (const auto& a : e.args) args.push_back(expr(a, env));
    if (qual == "Math") {
      auto need = [&](std::size_t n) {
        if (args.size() != n) unsupported(line, "Math." + fn + " with " + std::to_string(args.size()) + " arguments");
      };
      if (fn == "pow") return need(2), Expr::bin(BinOp::Pow, args[0], args[1]);
      if (fn == "min") return need(2), Expr::select(Expr::bin(BinOp::Le, args[0], args[1]), args[0], args[1]);
      if (fn == "max") return need(2), Expr::select(Expr::bin(BinOp::Ge, args[0], args[1]), args[0], args[1]);
      if (auto f = eqc::func_from_name(fn)) return need(1), Expr::call(*f, args[0]);
      unsupported(line, "call to Math." + fn);
    }
    if (!qual.empty() && !e.qualified_this) unsupported(line, "call to " + e.text);
    auto sib = std::find_if(siblings_.begin(), siblings_.end(),
                            [&](const Sibling& s) { return s.name == fn && s.arity == args.size(); });
    if (sib == siblings_.end()) unsupported(line, "call to unknown method " + e.text);
    if (active_.count(sib->iri)) unsupported(line, "recursive call to " + fn);
    MethodDecl decl = parse_method(sib->serialization);
    if (decl.is_constructor || decl.return_type == "void") unsupported(line, "call to void method " + fn);
    active_.insert(sib->iri);
    Outcome out = run(decl, sib->begins, args, env);
    active_.erase(sib->iri);
    for (const auto& [k, v] : out.env.vals) {
      if (k.rfind("this.", 0) != 0) continue;
      auto before = env.vals.find(k);
      bool changed = before == env.vals.end() ? v != Expr::var(k.substr(5)) : v != before->second;
      if (changed) unsupported(line, "call to " + fn + ", which writes " + k.substr(5));
    }
    if (!out.ret) unsupported(line, "call to " + fn + ", which does not return a value");
    return *out.ret;
  }

  const kg::Graph& g_;
  std::vector<Sibling> siblings_;
  std::set<std::string, std::less<>> fields_;
  std::set<Iri> active_;
  int line_base_ = 1;
};

}  // namespace

std::vector<Iri> select_computational_methods(const kg::Graph& code) {
  std::vector<std::tuple<std::string, std::int64_t, Iri>> found;
  for (const auto& m : code.subjects(rdf::type, cem::Method)) {
    bool computes = false;
    for (const auto& s : code.subjects(cem::inMethod, m)) {
      if (code.object(s, cem::hasOperator)) {
        computes = true;
        break;
      }
    }
    if (computes) found.emplace_back(lexical(code, m, cem::file), integer(code, m, cem::beginsAt), m);
  }
  std::sort(found.begin(), found.end());
  std::vector<Iri> out;
  for (auto& [f, b, m] : found) out.push_back(m);
  return out;
}

Translation translate_method(const kg::Graph& code, const Iri& method, const MethodIoReport& io) {
  if (!code.contains({method, rdf::type, cem::Method}))
    throw CodexError(CodexError::Code::UnknownMethod, "no method " + method.str() + " in the code graph");
  std::string source = lexical(code, method, cem::serialization);
  int begins = static_cast<int>(integer(code, method, cem::beginsAt));
  auto cls = code.object(method, cem::containedIn);
  if (source.empty() || !cls || !is_iri(*cls))
    throw CodexError(CodexError::Code::MalformedCodeModel, method.str() + " lacks its source or class");

  MethodDecl decl;
  try {
    decl = parse_method(source);
  } catch (const SyntaxError& e) {
    throw CodexError(CodexError::Code::MalformedCodeModel, "stored source of " + method.str() + ": " + e.what());
  }

  Translator tr(code, std::get<Iri>(*cls));
  std::vector<Expr> params;
  for (const auto& p : decl.params) params.push_back(Expr::var(p.name));
  Outcome out = tr.run(decl, begins, params, Env{});

  eqc::FunctionDef fn;
  fn.name = decl.name;
  bool returns_value = !decl.is_constructor && decl.return_type != "void";
  if (returns_value) {
    if (!out.ret)
      throw CodexError(CodexError::Code::UnsupportedConstruct, decl.name + " does not return a value", begins,
                       "missing return");
    fn.output = decl.name + "_return";
    fn.body = *out.ret;
  } else {
    if (io.implicit_outputs.size() != 1)
      throw CodexError(CodexError::Code::UnsupportedConstruct,
                       decl.name + " is void and writes " + std::to_string(io.implicit_outputs.size()) +
                           " output fields; exactly one is needed",
                       begins, "void method without a single output");
    const std::string& field = *io.implicit_outputs.begin();
    auto it = out.env.vals.find(field_key(field));
    fn.body = it == out.env.vals.end() ? Expr::var(field) : it->second;
    bool reads_itself = eqc::mentions(fn.body, field) || io.implicit_inputs.count(field);
    fn.output = reads_itself ? field + "_new" : field;
  }

  fn.inputs = io.explicit_params;
  for (const auto& in : io.implicit_inputs) {
    if (std::find(fn.inputs.begin(), fn.inputs.end(), in) == fn.inputs.end()) fn.inputs.push_back(in);
  }
  auto free = eqc::free_variables(fn.body);
  std::sort(free.begin(), free.end());
  for (const auto& v : free) {
    if (std::find(fn.inputs.begin(), fn.inputs.end(), v) == fn.inputs.end()) fn.inputs.push_back(v);
  }
  try {
    eqc::validate(fn);
  } catch (const std::invalid_argument& e) {
    throw CodexError(CodexError::Code::UnsupportedConstruct, decl.name + ": " + e.what(), begins, "io mismatch");
  }
  return {fn, eqc::emit_function_text(fn)};
}

}  // namespace modelforge::codex
