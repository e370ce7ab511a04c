#pragma once

#include "modelforge/kg/graph.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace modelforge::kg {

struct Variable {
  std::string name;  // without the leading '?'
  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

using PatternTerm = std::variant<Variable, Iri, Literal>;

/// Parses `?x`, `prefix:local` or a literal in the graph-file syntax
/// (`"lex"^^xsd:integer` with a compact datatype, or a bare quoted string).
PatternTerm parse_pattern_term(std::string_view text);

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

enum class FilterOp { Eq, Ne, Lt, Le };

std::optional<FilterOp> parse_filter_op(std::string_view op);

struct Filter {
  std::string variable;
  FilterOp op = FilterOp::Eq;
  std::variant<Variable, Term> operand;
};

struct PatternQuery {
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;

  /// Distinct variables in order of first appearance.
  std::vector<std::string> variables() const;
  /// Throws MalformedQuery when a filter names a variable no pattern binds.
  void validate() const;
};

struct QueryResult {
  std::vector<std::string> variables;
  std::vector<std::vector<Term>> rows;  // sorted lexicographically, deduplicated

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::size_t column(std::string_view var) const;
  const Term& at(std::size_t row, std::string_view var) const { return rows[row][column(var)]; }
};

/// Three-way comparison used by filters: numeric for two numeric literals,
/// term order otherwise.
int compare_terms(const Term& a, const Term& b);

/// Basic graph pattern evaluation over the union of `graphs`.
QueryResult evaluate(const PatternQuery& query, std::span<const Graph* const> graphs);

}  // namespace modelforge::kg
