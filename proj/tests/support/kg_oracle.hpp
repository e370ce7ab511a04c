#pragma once

// Brute-force reference for basic graph pattern queries and the random
// graph/query generators shared by the unit and acceptance suites.

#include "modelforge/kg/query.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <map>
#include <random>

namespace modelforge::testing {

using namespace modelforge::kg;

/// Nested-loop join: pattern k scans every triple for each partial binding of
/// patterns 0..k-1, in written order. Filters are applied to complete rows.
inline std::vector<std::vector<Term>> nested_loop_join(const PatternQuery& q, const std::vector<Triple>& triples) {
  std::vector<std::string> vars = q.variables();
  std::vector<std::vector<Term>> rows;
  if (q.patterns.empty()) return rows;

  auto slot = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), name) - vars.begin());
  };
  std::vector<std::optional<Term>> b(vars.size());

  auto unify = [&](const PatternTerm& pt, const Term& value, std::vector<std::size_t>& set) {
    if (const auto* v = std::get_if<Variable>(&pt)) {
      auto i = slot(v->name);
      if (!b[i]) {
        b[i] = value;
        set.push_back(i);
        return true;
      }
      return *b[i] == value;
    }
    if (const auto* i = std::get_if<Iri>(&pt)) return value == Term{*i};
    return value == Term{std::get<Literal>(pt)};
  };
  auto cmp = [](const Term& a, const Term& c) {
    const auto* la = std::get_if<Literal>(&a);
    const auto* lc = std::get_if<Literal>(&c);
    if (la && lc && la->is_numeric() && lc->is_numeric()) {
      double x = std::stod(la->lexical), y = std::stod(lc->lexical);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    if (a < c) return -1;
    if (c < a) return 1;
    return 0;
  };
  auto filters_hold = [&] {
    for (const auto& flt : q.filters) {
      const Term& lhs = *b[slot(flt.variable)];
      Term rhs = std::holds_alternative<Variable>(flt.operand) ? *b[slot(std::get<Variable>(flt.operand).name)]
                                                               : std::get<Term>(flt.operand);
      int c = cmp(lhs, rhs);
      bool ok = true;
      switch (flt.op) {
        case FilterOp::Eq: ok = c == 0; break;
        case FilterOp::Ne: ok = c != 0; break;
        case FilterOp::Lt: ok = c < 0; break;
        case FilterOp::Le: ok = c <= 0; break;
      }
      if (!ok) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> level = [&](std::size_t k) {
    if (k == q.patterns.size()) {
      if (!filters_hold()) return;
      std::vector<Term> row;
      for (const auto& v : b) row.push_back(*v);
      rows.push_back(std::move(row));
      return;
    }
    for (const Triple& t : triples) {
      std::vector<std::size_t> set;
      const auto& tp = q.patterns[k];
      if (unify(tp.subject, Term{t.subject}, set) && unify(tp.predicate, Term{t.predicate}, set) &&
          unify(tp.object, t.object, set))
        level(k + 1);
      for (auto i : set) b[i].reset();
    }
  };
  level(0);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

struct RandomKg {
  std::mt19937_64 rng;
  explicit RandomKg(std::uint64_t seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Iri node() { return Iri("mf", "n" + std::to_string(pick(12))); }
  Iri pred() { return Iri("cem", "p" + std::to_string(pick(4))); }
  Term object() {
    if (pick(3) == 0) return Literal::integer(pick(6));
    return node();
  }

  std::vector<Triple> graph(int max_triples) {
    std::vector<Triple> ts;
    int n = pick(max_triples + 1);
    for (int i = 0; i < n; ++i) ts.push_back({node(), pred(), object()});
    return ts;
  }

  PatternTerm pattern_term(bool predicate_position) {
    static const char* names[] = {"a", "b", "c", "d"};
    if (pick(5) < 3) return Variable{names[pick(4)]};
    if (predicate_position) return pred();
    if (pick(3) == 0) return Literal::integer(pick(6));
    return node();
  }

  PatternQuery query() {
    PatternQuery q;
    int n = 1 + pick(4);
    for (int i = 0; i < n; ++i) {
      TriplePattern tp;
      tp.subject = pick(6) == 0 ? PatternTerm{node()} : PatternTerm{Variable{std::string(1, char('a' + pick(4)))}};
      tp.predicate = pattern_term(true);
      tp.object = pattern_term(false);
      q.patterns.push_back(tp);
    }
    auto vars = q.variables();
    if (!vars.empty() && pick(3) == 0) {
      Filter f;
      f.variable = vars[pick(static_cast<int>(vars.size()))];
      f.op = static_cast<FilterOp>(pick(4));
      if (pick(2) == 0 && vars.size() > 1)
        f.operand = Variable{vars[pick(static_cast<int>(vars.size()))]};
      else
        f.operand = Term{Literal::integer(pick(6))};
      q.filters.push_back(f);
    }
    return q;
  }
};

}  // namespace modelforge::testing
