#include "modelforge/codex/io.hpp"
#include "modelforge/kg/vocab.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace modelforge::codex {

using kg::Iri;
using kg::Literal;
using kg::Term;
namespace cem = kg::vocab::cem;
namespace rdf = kg::vocab::rdf;

namespace {

std::optional<std::string> str(const kg::Graph& g, const Iri& s, const Iri& p) {
  auto o = g.object(s, p);
  if (!o || is_iri(*o)) return std::nullopt;
  return std::get<Literal>(*o).lexical;
}

std::optional<std::int64_t> num(const kg::Graph& g, const Iri& s, const Iri& p) {
  auto o = g.object(s, p);
  if (!o || is_iri(*o) || !std::get<Literal>(*o).is_numeric()) return std::nullopt;
  return std::get<Literal>(*o).as_int();
}

std::optional<Iri> link(const kg::Graph& g, const Iri& s, const Iri& p) {
  auto o = g.object(s, p);
  if (!o || !is_iri(*o)) return std::nullopt;
  return std::get<Iri>(*o);
}

struct Stmt {
  Iri iri;
  std::int64_t index = 0;
  std::string kind;
  Iri parent;
  std::string branch;
  int begin = 0, end = 0;
};

struct Ref {
  std::int64_t seq = 0;
  Iri var;
  std::string usage;
  std::optional<Iri> loop;
  int line = 0;
  std::optional<Literal> literal;
  std::optional<Iri> stmt;
};

}  // namespace

MethodIoReport infer_io(const kg::Graph& g, const Iri& method, const IoOptions& options) {
  if (!g.contains({method, rdf::type, cem::Method}))
    throw CodexError(CodexError::Code::UnknownMethod, "no method " + method.str() + " in the code graph");

  MethodIoReport r;
  r.method = method;

  std::vector<std::pair<std::int64_t, std::string>> params;
  for (const auto& p : g.objects(method, cem::arguments)) {
    const Iri& P = std::get<Iri>(p);
    params.emplace_back(num(g, P, cem::argumentIndex).value_or(0), str(g, P, cem::name).value_or(""));
  }
  std::sort(params.begin(), params.end());
  for (auto& [i, n] : params) r.explicit_params.push_back(n);

  // Statements, and which of them sit after a return in their block.
  std::vector<Stmt> stmts;
  for (const auto& s : g.subjects(cem::inMethod, method)) {
    if (!g.contains({s, rdf::type, cem::Statement})) continue;
    Stmt st;
    st.iri = s;
    st.index = num(g, s, cem::statementIndex).value_or(0);
    st.kind = str(g, s, cem::statementKind).value_or("");
    st.parent = link(g, s, cem::containedIn).value_or(method);
    st.branch = str(g, s, cem::branch).value_or("");
    st.begin = static_cast<int>(num(g, s, cem::beginsAt).value_or(0));
    st.end = static_cast<int>(num(g, s, cem::endsAt).value_or(0));
    stmts.push_back(std::move(st));
  }
  std::sort(stmts.begin(), stmts.end(), [](const Stmt& a, const Stmt& b) { return a.index < b.index; });

  std::set<Iri> dead_stmts;
  std::map<std::pair<Iri, std::string>, bool> block_returned;
  std::map<std::pair<Iri, std::string>, std::pair<int, int>> ranges;
  for (const auto& st : stmts) {
    auto key = std::pair(st.parent, st.branch);
    if (dead_stmts.count(st.parent)) {
      dead_stmts.insert(st.iri);
      continue;
    }
    if (block_returned[key]) {
      dead_stmts.insert(st.iri);
      auto [it, fresh] = ranges.try_emplace(key, st.begin, st.end);
      if (!fresh) it->second.second = std::max(it->second.second, st.end);
      continue;
    }
    if (st.kind == "return") block_returned[key] = true;
  }
  for (const auto& [k, range] : ranges) r.unreachable.push_back(range);
  std::sort(r.unreachable.begin(), r.unreachable.end());

  // References in execution order.
  std::vector<Ref> refs;
  for (const auto& s : g.subjects(cem::inMethod, method)) {
    if (!g.contains({s, rdf::type, cem::Reference})) continue;
    auto seq = num(g, s, cem::sequence);
    if (!seq)
      throw CodexError(CodexError::Code::MalformedCodeModel, "reference " + s.str() + " has no sequence number");
    auto stmt = link(g, s, cem::inStatement);
    if (stmt && dead_stmts.count(*stmt)) continue;
    Ref ref;
    ref.seq = *seq;
    ref.var = link(g, s, cem::refersTo).value_or(Iri{});
    ref.usage = str(g, s, cem::usage).value_or("read");
    ref.loop = link(g, s, cem::inLoop);
    ref.stmt = stmt;
    ref.line = static_cast<int>(num(g, s, cem::lineNumber).value_or(0));
    if (auto lit = g.object(s, cem::assignedLiteral); lit && !is_iri(*lit)) ref.literal = std::get<Literal>(*lit);
    refs.push_back(std::move(ref));
  }
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) { return a.seq < b.seq; });

  std::map<Iri, std::vector<const Ref*>> by_var;
  for (const auto& ref : refs) by_var[ref.var].push_back(&ref);

  auto loop_chain = [&](const std::optional<Iri>& loop) {
    std::set<Iri> chain;
    for (auto l = loop; l && chain.insert(*l).second;) l = link(g, *l, cem::inLoop);
    return chain;
  };

  std::map<Iri, const Stmt*> stmt_of;
  for (const auto& st : stmts) stmt_of[st.iri] = &st;
  // Blocks enclosing a statement, innermost first.
  auto enclosing = [&](const std::optional<Iri>& s) {
    std::vector<std::pair<Iri, std::string>> chain;
    for (auto it = s ? stmt_of.find(*s) : stmt_of.end(); it != stmt_of.end(); it = stmt_of.find(it->second->parent)) {
      chain.emplace_back(it->second->parent, it->second->branch);
      if (chain.size() > stmt_of.size()) break;
    }
    return chain;
  };
  // A later write kills an earlier one when it runs whenever the earlier one
  // did: same block, or a block enclosing it.
  auto kills = [&](const Ref* later, const Ref* w) {
    auto mine = enclosing(w->stmt);
    auto theirs = enclosing(later->stmt);
    return !theirs.empty() && std::find(mine.begin(), mine.end(), theirs.front()) != mine.end();
  };

  std::map<std::string, Literal> constants;
  std::vector<std::pair<int, std::string>> dead;
  for (const auto& [var, list] : by_var) {
    std::string name = str(g, var, cem::name).value_or(var.local);
    std::string scope = str(g, var, cem::scope).value_or("unknown");
    bool is_param = scope == "parameter";

    auto first = std::find_if(list.begin(), list.end(), [](const Ref* x) { return x->usage != "declare"; });
    if (first != list.end() && (*first)->usage == "read" && !is_param) r.implicit_inputs.insert(name);

    std::vector<const Ref*> writes;
    for (const Ref* x : list) {
      if (x->usage == "write") writes.push_back(x);
    }
    bool output = options.field_outputs && (scope == "field" || scope == "unknown") && !writes.empty();
    if (output) r.implicit_outputs.insert(name);
    if (scope == "local" && writes.size() == 1 && writes[0]->literal) constants.emplace(name, *writes[0]->literal);

    if (output) continue;
    for (const Ref* w : writes) {
      auto w_loops = loop_chain(w->loop);
      std::int64_t killed_at = std::numeric_limits<std::int64_t>::max();
      for (const Ref* x : writes) {
        if (x->seq > w->seq && kills(x, w)) {
          killed_at = x->seq;
          break;
        }
      }
      bool live = std::any_of(list.begin(), list.end(), [&](const Ref* x) {
        if (x->usage != "read") return false;
        if (x->seq > w->seq && x->seq < killed_at) return true;
        if (w_loops.empty()) return false;
        auto x_loops = loop_chain(x->loop);
        return std::any_of(x_loops.begin(), x_loops.end(), [&](const Iri& l) { return w_loops.count(l) > 0; });
      });
      if (!live) dead.emplace_back(w->line, name);
    }
  }
  for (auto& [n, lit] : constants) r.constants.emplace_back(n, lit);
  std::sort(dead.begin(), dead.end());
  for (auto& [line, n] : dead) r.dead_assignments.emplace_back(n, line);
  return r;
}

}  // namespace modelforge::codex
