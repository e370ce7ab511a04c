#include "modelforge/kg/query.hpp"

#include <algorithm>
#include <map>

namespace modelforge::kg {

namespace {

KgError malformed(const std::string& what) { return KgError(KgError::Code::MalformedQuery, what); }

std::optional<Datatype> datatype_from_name(std::string_view name) {
  if (name == "string") return Datatype::String;
  if (name == "integer" || name == "int" || name == "long") return Datatype::Integer;
  if (name == "double" || name == "float" || name == "decimal") return Datatype::Float;
  if (name == "boolean") return Datatype::Boolean;
  return std::nullopt;
}

using Bindings = std::map<std::string, Term, std::less<>>;

// Resolves a pattern position against the current bindings. Returns the
// constant to match on (if any) and the variable to bind (if unbound).
struct Slot {
  std::optional<Term> constant;
  const std::string* unbound = nullptr;
};

Slot resolve(const PatternTerm& pt, const Bindings& b) {
  Slot s;
  if (const auto* v = std::get_if<Variable>(&pt)) {
    auto it = b.find(v->name);
    if (it != b.end())
      s.constant = it->second;
    else
      s.unbound = &v->name;
  } else if (const auto* i = std::get_if<Iri>(&pt)) {
    s.constant = Term{*i};
  } else {
    s.constant = Term{std::get<Literal>(pt)};
  }
  return s;
}

int bound_count(const TriplePattern& tp, const Bindings& b) {
  int n = 0;
  for (const auto* pt : {&tp.subject, &tp.predicate, &tp.object}) {
    if (resolve(*pt, b).constant) ++n;
  }
  return n;
}

bool filter_holds(const Filter& f, const Bindings& b) {
  const Term& lhs = b.find(f.variable)->second;
  const Term* rhs = nullptr;
  if (const auto* v = std::get_if<Variable>(&f.operand)) {
    auto it = b.find(v->name);
    if (it == b.end()) return true;  // evaluated once the operand is bound
    rhs = &it->second;
  } else {
    rhs = &std::get<Term>(f.operand);
  }
  int c = compare_terms(lhs, *rhs);
  switch (f.op) {
    case FilterOp::Eq: return c == 0;
    case FilterOp::Ne: return c != 0;
    case FilterOp::Lt: return c < 0;
    case FilterOp::Le: return c <= 0;
  }
  return false;
}

bool filter_ready(const Filter& f, const Bindings& b) {
  if (b.find(f.variable) == b.end()) return false;
  if (const auto* v = std::get_if<Variable>(&f.operand)) return b.find(v->name) != b.end();
  return true;
}

class Join {
public:
  Join(const PatternQuery& q, std::span<const Graph* const> graphs, std::vector<std::vector<Term>>& rows,
       const std::vector<std::string>& vars)
      : q_(q), graphs_(graphs), rows_(rows), vars_(vars), used_(q.patterns.size(), false) {}

  void run(Bindings& b, std::size_t depth) {
    if (depth == q_.patterns.size()) {
      std::vector<Term> row;
      row.reserve(vars_.size());
      for (const auto& v : vars_) row.push_back(b.find(v)->second);
      rows_.push_back(std::move(row));
      return;
    }
    // Most-bound pattern next; ties broken by position for determinism.
    std::size_t pick = q_.patterns.size();
    int best = -1;
    for (std::size_t i = 0; i < q_.patterns.size(); ++i) {
      if (used_[i]) continue;
      int n = bound_count(q_.patterns[i], b);
      if (n > best) {
        best = n;
        pick = i;
      }
    }
    used_[pick] = true;
    const auto& tp = q_.patterns[pick];
    Slot s = resolve(tp.subject, b), p = resolve(tp.predicate, b), o = resolve(tp.object, b);

    std::optional<Iri> sc, pc;
    if (s.constant) {
      if (!is_iri(*s.constant)) {
        used_[pick] = false;
        return;
      }
      sc = std::get<Iri>(*s.constant);
    }
    if (p.constant) {
      if (!is_iri(*p.constant)) {
        used_[pick] = false;
        return;
      }
      pc = std::get<Iri>(*p.constant);
    }

    for (const Graph* g : graphs_) {
      std::vector<Triple> hits = g->find(sc, pc, o.constant);
      for (const auto& t : hits) {
        std::vector<std::string> added;
        bool ok = bind(b, s.unbound, Term{t.subject}, added) && bind(b, p.unbound, Term{t.predicate}, added) &&
                  bind(b, o.unbound, t.object, added);
        if (ok) {
          for (const auto& f : q_.filters) {
            if (filter_ready(f, b) && !filter_holds(f, b)) {
              ok = false;
              break;
            }
          }
        }
        if (ok) run(b, depth + 1);
        for (const auto& name : added) b.erase(name);
      }
    }
    used_[pick] = false;
  }

private:
  // Binds `name` to `value`; a repeated variable within one pattern must agree.
  static bool bind(Bindings& b, const std::string* name, const Term& value, std::vector<std::string>& added) {
    if (!name) return true;
    auto it = b.find(*name);
    if (it != b.end()) return it->second == value;
    b.emplace(*name, value);
    added.push_back(*name);
    return true;
  }

  const PatternQuery& q_;
  std::span<const Graph* const> graphs_;
  std::vector<std::vector<Term>>& rows_;
  const std::vector<std::string>& vars_;
  std::vector<bool> used_;
};

}  // namespace

PatternTerm parse_pattern_term(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw malformed("empty pattern term");
  if (text.front() == '?') {
    if (text.size() == 1) throw malformed("variable without a name");
    return Variable{std::string(text.substr(1))};
  }
  if (text.front() == '"') {
    auto close = text.find('"', 1);
    if (close == std::string_view::npos) throw malformed("unterminated literal " + std::string(text));
    std::string lex(text.substr(1, close - 1));
    auto rest = text.substr(close + 1);
    if (rest.empty()) return Literal(lex, Datatype::String);
    if (rest.substr(0, 2) != "^^") throw malformed("bad literal suffix in " + std::string(text));
    rest.remove_prefix(2);
    auto colon = rest.find(':');
    auto dt = datatype_from_name(colon == std::string_view::npos ? rest : rest.substr(colon + 1));
    if (!dt) throw malformed("unknown datatype in " + std::string(text));
    try {
      return Literal(lex, *dt);
    } catch (const KgError& e) {
      throw malformed(e.what());
    }
  }
  try {
    return Iri::parse(text);
  } catch (const KgError& e) {
    throw malformed(e.what());
  }
}

std::optional<FilterOp> parse_filter_op(std::string_view op) {
  if (op == "=" || op == "==") return FilterOp::Eq;
  if (op == "!=" || op == "\xE2\x89\xA0") return FilterOp::Ne;
  if (op == "<") return FilterOp::Lt;
  if (op == "<=" || op == "\xE2\x89\xA4") return FilterOp::Le;
  return std::nullopt;
}

std::vector<std::string> PatternQuery::variables() const {
  std::vector<std::string> out;
  for (const auto& tp : patterns) {
    for (const auto* pt : {&tp.subject, &tp.predicate, &tp.object}) {
      if (const auto* v = std::get_if<Variable>(pt)) {
        if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
      }
    }
  }
  return out;
}

void PatternQuery::validate() const {
  auto vars = variables();
  auto known = [&](const std::string& n) { return std::find(vars.begin(), vars.end(), n) != vars.end(); };
  for (const auto& f : filters) {
    if (!known(f.variable)) throw malformed("filter references unbound variable ?" + f.variable);
    if (const auto* v = std::get_if<Variable>(&f.operand); v && !known(v->name))
      throw malformed("filter references unbound variable ?" + v->name);
  }
}

std::size_t QueryResult::column(std::string_view var) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == var) return i;
  }
  throw KgError(KgError::Code::MalformedQuery, "no column ?" + std::string(var));
}

int compare_terms(const Term& a, const Term& b) {
  const auto* la = std::get_if<Literal>(&a);
  const auto* lb = std::get_if<Literal>(&b);
  if (la && lb && la->is_numeric() && lb->is_numeric()) {
    double x = la->as_double(), y = lb->as_double();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  auto c = a <=> b;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

QueryResult evaluate(const PatternQuery& query, std::span<const Graph* const> graphs) {
  query.validate();
  QueryResult result;
  result.variables = query.variables();
  if (query.patterns.empty()) return result;
  Bindings b;
  Join join(query, graphs, result.rows, result.variables);
  join.run(b, 0);
  std::sort(result.rows.begin(), result.rows.end());
  result.rows.erase(std::unique(result.rows.begin(), result.rows.end()), result.rows.end());
  return result;
}

}  // namespace modelforge::kg
