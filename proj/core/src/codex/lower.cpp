#include "modelforge/codex/cem.hpp"
#include "modelforge/kg/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace modelforge::codex {

using kg::Iri;
using kg::Literal;
using kg::Term;
using kg::Triple;
namespace cem = kg::vocab::cem;
namespace rdf = kg::vocab::rdf;

bool IgnoreList::ignores(std::string_view package, std::string_view class_name) const {
  if (class_names.count(class_name)) return true;
  for (const auto& p : package_prefixes) {
    if (package == p) return true;
    if (package.size() > p.size() && package.substr(0, p.size()) == p && package[p.size()] == '.') return true;
  }
  return false;
}

IgnoreList IgnoreList::parse(std::string_view text) {
  IgnoreList out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() : nl + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.find('.') != std::string_view::npos) {
      if (line.size() > 2 && line.substr(line.size() - 2) == ".*") line.remove_suffix(2);
      out.package_prefixes.emplace(line);
    } else {
      out.class_names.emplace(line);
    }
  }
  return out;
}

Iri class_iri(const std::string& path, const std::string& package, const std::string& name) {
  return kg::skolem("mf", "class", {path, package, name});
}

Iri method_iri(const Iri& cls, const MethodDecl& m) {
  std::string sig;
  for (const auto& p : m.params) sig += p.type + ",";
  return kg::skolem("mf", "method", {cls.str(), m.name, sig});
}

namespace {

bool is_integral_type(std::string_view t) { return t == "int" || t == "long" || t == "short" || t == "byte"; }

bool is_literal(const JExpr& e) {
  using K = JExpr::Kind;
  if (e.kind == K::Number || e.kind == K::String || e.kind == K::Bool) return true;
  return e.kind == K::Unary && e.text == "-" && e.args[0].kind == K::Number;
}

Literal literal_of(const JExpr& e) {
  using K = JExpr::Kind;
  if (e.kind == K::String) return Literal::string(e.text);
  if (e.kind == K::Bool) return Literal::boolean(e.text == "true");
  std::string lex = e.kind == K::Unary ? "-" + e.args[0].text : e.text;
  bool integral = e.kind == K::Unary ? e.args[0].integral : e.integral;
  if (integral) return Literal::integer(std::stoll(lex));
  return Literal::floating(std::stod(lex));
}

struct MethodRef {
  std::string name;
  std::size_t arity;
  Iri iri;
};

struct ClassInfo {
  const CompilationUnit* unit = nullptr;
  const ClassDecl* decl = nullptr;
  Iri iri;
  bool ignored = false;
  std::map<std::string, std::string, std::less<>> field_types;
  std::vector<MethodRef> methods;

  const Iri* find(std::string_view name, std::size_t arity) const {
    for (const auto& m : methods) {
      if (m.name == name && m.arity == arity) return &m.iri;
    }
    return nullptr;
  }
};

struct Var {
  Iri iri;
  std::string scope;
  std::string type;
};

class Lowerer {
public:
  explicit Lowerer(const IgnoreList& ignore) : ignore_(ignore) {}

  std::vector<Triple> run(std::span<const CompilationUnit> units) {
    for (const auto& u : units) {
      for (const auto& c : u.classes) {
        ClassInfo info;
        info.unit = &u;
        info.decl = &c;
        info.iri = class_iri(u.path, u.package, c.name);
        info.ignored = ignore_.ignores(u.package, c.name);
        for (const auto& f : c.fields) info.field_types[f.name] = f.type;
        for (const auto& m : c.methods) info.methods.push_back({m.name, m.params.size(), method_iri(info.iri, m)});
        infos_.push_back(std::move(info));
      }
    }
    for (const auto& info : infos_) {
      if (!info.ignored) by_name_.emplace(info.decl->name, &info);
    }
    for (const auto& info : infos_) {
      if (!info.ignored) lower_class(info);
    }
    for (const auto& u : units) lower_comments(u);
    std::sort(out_.begin(), out_.end());
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

private:
  void add(const Iri& s, const Iri& p, Term o) { out_.push_back({s, p, std::move(o)}); }
  void add_str(const Iri& s, const Iri& p, std::string v) { add(s, p, Literal::string(std::move(v))); }
  void add_int(const Iri& s, const Iri& p, std::int64_t v) { add(s, p, Literal::integer(v)); }

  void lower_class(const ClassInfo& info) {
    const ClassDecl& c = *info.decl;
    const Iri& C = info.iri;
    cls_ = &info;
    node_iris_[{info.unit, c.id}] = C;
    add(C, rdf::type, cem::Class);
    add_str(C, cem::name, c.name);
    add_str(C, cem::file, info.unit->path);
    if (!info.unit->package.empty()) add_str(C, cem::package, info.unit->package);
    add_int(C, cem::beginsAt, c.span.begin_line);
    add_int(C, cem::endsAt, c.span.end_line);
    for (const auto& f : c.fields) {
      Iri F = kg::skolem("mf", "var", {C.str(), "field", f.name});
      node_iris_[{info.unit, f.id}] = F;
      emit_var(F, f.name, "field", f.type, C);
    }
    for (const auto& m : c.methods) lower_method(info, m);
  }

  void emit_var(const Iri& v, const std::string& name, const std::string& scope, const std::string& type,
                const Iri& owner) {
    add(v, rdf::type, cem::CodeVariable);
    add_str(v, cem::name, name);
    add_str(v, cem::scope, scope);
    if (!type.empty()) add_str(v, cem::datatype, type);
    add(v, cem::containedIn, owner);
  }

  void lower_method(const ClassInfo& info, const MethodDecl& m) {
    M_ = method_iri(info.iri, m);
    vars_.clear();
    seq_ = stmt_index_ = call_index_ = 0;
    loops_.clear();
    node_iris_[{info.unit, m.id}] = M_;

    add(M_, rdf::type, cem::Method);
    add_str(M_, cem::name, m.name);
    add_str(M_, cem::file, info.unit->path);
    add(M_, cem::containedIn, info.iri);
    add_int(M_, cem::beginsAt, m.span.begin_line);
    add_int(M_, cem::endsAt, m.span.end_line);
    add_str(M_, cem::serialization, info.unit->text.substr(m.begin_offset, m.end_offset - m.begin_offset));
    if (!m.is_constructor) add_str(M_, cem::returnTypes, m.return_type);
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      const auto& p = m.params[i];
      Iri P = kg::skolem("mf", "var", {M_.str(), "param", p.name});
      emit_var(P, p.name, "parameter", p.type, M_);
      add_int(P, cem::argumentIndex, static_cast<std::int64_t>(i));
      add(M_, cem::arguments, P);
      vars_[p.name] = {P, "parameter", p.type};
    }
    for (const auto& s : m.body) statement(s, M_, "", false);
  }

  // Variable a name refers to at this point of the method, if any.
  const Var* resolve(const std::string& dotted, bool self) {
    std::string head = dotted.substr(0, dotted.find('.'));
    if (!self) {
      if (auto it = vars_.find(head); it != vars_.end()) return &it->second;
    }
    std::string key = "field:" + head;
    if (auto it = vars_.find(key); it != vars_.end()) return &it->second;
    if (auto f = cls_->field_types.find(head); f != cls_->field_types.end()) {
      Iri F = kg::skolem("mf", "var", {cls_->iri.str(), "field", head});
      return &(vars_[key] = {F, "field", f->second});
    }
    bool dotted_name = dotted.find('.') != std::string::npos;
    if (!self && dotted_name && std::isupper(static_cast<unsigned char>(head[0]))) return nullptr;  // Math.PI
    Iri U = kg::skolem("mf", "var", {cls_->iri.str(), "unknown", head});
    if (emitted_unknown_.insert(U).second) emit_var(U, head, "unknown", "", cls_->iri);
    return &(vars_[key] = {U, "unknown", ""});
  }

  Iri reference(const Var& v, const Iri& S, const std::string& usage, const std::string& context, int line) {
    int seq = seq_++;
    Iri R = kg::skolem("mf", "ref", {M_.str(), std::to_string(seq)});
    add(R, rdf::type, cem::Reference);
    add(R, cem::refersTo, v.iri);
    add_str(R, cem::usage, usage);
    add_str(R, cem::context, context);
    add_int(R, cem::sequence, seq);
    add_int(R, cem::lineNumber, line);
    add(R, cem::inStatement, S);
    add(R, cem::inMethod, M_);
    if (!loops_.empty()) add(R, cem::inLoop, loops_.back());
    return R;
  }

  void reads(const JExpr& e, const Iri& S, const std::string& context) {
    using K = JExpr::Kind;
    switch (e.kind) {
      case K::Name:
        if (const Var* v = resolve(e.text, e.qualified_this)) reference(*v, S, "read", context, e.span.begin_line);
        return;
      case K::Ternary:
        reads(e.args[0], S, "condition");
        reads(e.args[1], S, context);
        reads(e.args[2], S, context);
        return;
      case K::Call: {
        auto [qual, name] = split_callee(e.text);
        if (!qual.empty()) {
          bool var_qualifier = vars_.count(qual.substr(0, qual.find('.'))) ||
                               cls_->field_types.count(qual.substr(0, qual.find('.')));
          if (var_qualifier) {
            if (const Var* v = resolve(qual, e.qualified_this)) reference(*v, S, "read", context, e.span.begin_line);
          }
        }
        for (const auto& a : e.args) reads(a, S, "argument");
        call(e, S);
        return;
      }
      case K::New:
        for (const auto& a : e.args) reads(a, S, "argument");
        return;
      default:
        for (const auto& a : e.args) reads(a, S, context);
    }
  }

  void call(const JExpr& e, const Iri& S) {
    Iri MC = kg::skolem("mf", "call", {M_.str(), std::to_string(call_index_++)});
    add(MC, rdf::type, cem::MethodCall);
    add_str(MC, cem::callee, e.text);
    add(MC, cem::inStatement, S);
    add(MC, cem::inMethod, M_);
    add_int(MC, cem::lineNumber, e.span.begin_line);
    auto [qual, name] = split_callee(e.text);
    const ClassInfo* target = nullptr;
    if (qual.empty() || e.qualified_this) {
      target = cls_;
    } else if (auto it = by_name_.find(qual); it != by_name_.end()) {
      target = it->second;
    }
    if (!target) return;
    if (const Iri* callee = target->find(name, e.args.size())) {
      add(MC, cem::invokes, *callee);
      add(M_, cem::calls, *callee);
      add(*callee, cem::isCalled, M_);
    }
  }

  bool string_typed(const JExpr& e) {
    using K = JExpr::Kind;
    if (e.kind == K::String) return true;
    if (e.kind == K::Name) {
      auto it = vars_.find(e.text);
      if (it != vars_.end()) return it->second.type == "String";
      auto f = cls_->field_types.find(e.text);
      return f != cls_->field_types.end() && f->second == "String";
    }
    if (e.kind == K::Binary && e.text == "+") return string_typed(e.args[0]) || string_typed(e.args[1]);
    return false;
  }

  void operators(const JExpr& e, std::set<std::string>& ops) {
    if (e.kind == JExpr::Kind::Binary) {
      const auto& op = e.text;
      bool arith = op == "+" || op == "-" || op == "*" || op == "/" || op == "%";
      if (arith && !(op == "+" && string_typed(e))) ops.insert(op);
    }
    for (const auto& a : e.args) operators(a, ops);
  }

  // i++, i += 1, i = i + 1 on an integral variable.
  bool bookkeeping(const JStmt& s) {
    if (s.increment) return true;
    if (!s.expr) return false;
    auto it = vars_.find(s.target);
    std::string type = it != vars_.end() ? it->second.type : "";
    if (!is_integral_type(type)) return false;
    const JExpr& e = *s.expr;
    auto int_lit = [](const JExpr& x) { return x.kind == JExpr::Kind::Number && x.integral; };
    if ((s.op == "+=" || s.op == "-=") && int_lit(e)) return true;
    if (s.op == "=" && e.kind == JExpr::Kind::Binary && (e.text == "+" || e.text == "-")) {
      const auto& a = e.args[0];
      const auto& b = e.args[1];
      bool self_a = a.kind == JExpr::Kind::Name && a.text == s.target;
      bool self_b = b.kind == JExpr::Kind::Name && b.text == s.target;
      return (self_a && int_lit(b)) || (self_b && int_lit(a) && e.text == "+");
    }
    return false;
  }

  static const char* kind_name(JStmt::Kind k) {
    switch (k) {
      case JStmt::Kind::VarDecl: return "declare";
      case JStmt::Kind::Assign: return "assign";
      case JStmt::Kind::If: return "if";
      case JStmt::Kind::While: return "while";
      case JStmt::Kind::For: return "for";
      case JStmt::Kind::Call: return "call";
      case JStmt::Kind::Return: return "return";
      case JStmt::Kind::Block: return "block";
      case JStmt::Kind::Break: return "break";
      case JStmt::Kind::Continue: return "continue";
      case JStmt::Kind::Empty: return "empty";
    }
    return "?";
  }

  void statement(const JStmt& s, const Iri& parent, const std::string& branch, bool header) {
    using K = JStmt::Kind;
    int idx = stmt_index_++;
    Iri S = kg::skolem("mf", "stmt", {M_.str(), std::to_string(idx)});
    node_iris_[{cls_->unit, s.id}] = S;
    add(S, rdf::type, cem::Statement);
    if (s.kind == K::If) add(S, rdf::type, cem::ConditionalBlock);
    if (s.kind == K::While || s.kind == K::For) add(S, rdf::type, cem::LoopBlock);
    add(S, cem::inMethod, M_);
    add(S, cem::containedIn, parent);
    add_int(S, cem::statementIndex, idx);
    add_str(S, cem::statementKind, kind_name(s.kind));
    add_int(S, cem::beginsAt, s.span.begin_line);
    add_int(S, cem::endsAt, s.span.end_line);
    if (!branch.empty()) add_str(S, cem::branch, branch);
    if (!loops_.empty()) add(S, cem::inLoop, loops_.back());

    std::set<std::string> ops;
    int line = s.span.begin_line;
    switch (s.kind) {
      case K::VarDecl: {
        vars_[s.target] = {kg::skolem("mf", "var", {M_.str(), "local", s.target}), "local", s.type};
        const Var& v = vars_[s.target];
        if (emitted_locals_.insert(v.iri).second) emit_var(v.iri, s.target, "local", s.type, M_);
        if (s.expr) {
          reads(*s.expr, S, "expression");
          operators(*s.expr, ops);
          Iri R = reference(v, S, "write", "target", line);
          if (is_literal(*s.expr)) add(R, cem::assignedLiteral, literal_of(*s.expr));
        } else {
          reference(v, S, "declare", "declaration", line);
        }
        break;
      }
      case K::Assign: {
        const Var* target = resolve(s.target, s.target_this);
        if (!target) break;
        Var v = *target;
        if (s.op != "=") reference(v, S, "read", "expression", line);
        if (s.expr) reads(*s.expr, S, "expression");
        Iri R = reference(v, S, "write", "target", line);
        if (s.op == "=" && s.expr && is_literal(*s.expr)) add(R, cem::assignedLiteral, literal_of(*s.expr));
        if (!bookkeeping(s)) {
          if (s.op != "=") ops.insert(s.op.substr(0, 1));
          if (s.expr) operators(*s.expr, ops);
        }
        break;
      }
      case K::If:
        reads(*s.expr, S, "condition");
        operators(*s.expr, ops);
        for (const auto& c : s.body) statement(c, S, "then", false);
        for (const auto& c : s.else_body) statement(c, S, "else", false);
        break;
      case K::While:
        loops_.push_back(S);
        reads(*s.expr, S, "condition");
        operators(*s.expr, ops);
        for (const auto& c : s.body) statement(c, S, "body", false);
        loops_.pop_back();
        break;
      case K::For:
        for (const auto& c : s.init) statement(c, S, "init", true);
        loops_.push_back(S);
        if (s.expr) reads(*s.expr, S, "condition");
        for (const auto& c : s.body) statement(c, S, "body", false);
        for (const auto& c : s.update) statement(c, S, "update", true);
        loops_.pop_back();
        break;
      case K::Call:
        reads(*s.expr, S, "expression");
        operators(*s.expr, ops);
        break;
      case K::Return:
        if (s.expr) {
          reads(*s.expr, S, "return");
          operators(*s.expr, ops);
        }
        break;
      case K::Block:
        for (const auto& c : s.body) statement(c, S, "body", false);
        break;
      default: break;
    }
    if (!header) {
      for (const auto& op : ops) add_str(S, cem::hasOperator, op);
    }
  }

  void lower_comments(const CompilationUnit& u) {
    for (const auto& c : u.comments) {
      bool inside_ignored = false;
      for (const auto& info : infos_) {
        if (info.unit == &u && info.ignored && c.span.begin_line >= info.decl->span.begin_line &&
            c.span.end_line <= info.decl->span.end_line)
          inside_ignored = true;
      }
      if (inside_ignored) continue;
      std::optional<Iri> target;
      if (c.attached_to) {
        auto it = node_iris_.find({&u, c.attached_to});
        if (it == node_iris_.end()) continue;  // attached to an ignored node
        target = it->second;
      }
      Iri K = kg::skolem("mf", "comment",
                         {u.path, std::to_string(c.span.begin_line), std::to_string(c.span.column)});
      add(K, rdf::type, cem::Comment);
      add_str(K, cem::text, c.text);
      add_str(K, cem::file, u.path);
      add_int(K, cem::beginsAt, c.span.begin_line);
      add_int(K, cem::endsAt, c.span.end_line);
      if (target) add(K, cem::commentOf, *target);
    }
  }

  const IgnoreList& ignore_;
  std::vector<Triple> out_;
  std::vector<ClassInfo> infos_;
  std::map<std::string, const ClassInfo*, std::less<>> by_name_;
  std::map<std::pair<const CompilationUnit*, int>, Iri> node_iris_;
  std::set<Iri> emitted_unknown_, emitted_locals_;

  const ClassInfo* cls_ = nullptr;
  Iri M_;
  std::map<std::string, Var, std::less<>> vars_;
  int seq_ = 0, stmt_index_ = 0, call_index_ = 0;
  std::vector<Iri> loops_;
};

}  // namespace

std::vector<Triple> lower_to_cem(std::span<const CompilationUnit> units, const IgnoreList& ignore) {
  return Lowerer(ignore).run(units);
}

std::vector<Triple> lower_to_cem(const CompilationUnit& unit, const IgnoreList& ignore) {
  return lower_to_cem(std::span<const CompilationUnit>(&unit, 1), ignore);
}

}  // namespace modelforge::codex
