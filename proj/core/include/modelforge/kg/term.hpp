#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace modelforge::kg {

class KgError : public std::runtime_error {
public:
  enum class Code { UnknownPrefix, UnknownGraph, MalformedQuery, InvalidTerm, IoFailure, ParseError };

  KgError(Code code, const std::string& what, int line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}

  Code code() const noexcept { return code_; }
  // 1-based line of a ParseError, 0 otherwise.
  int line() const noexcept { return line_; }

private:
  Code code_;
  int line_;
};

/// A compact IRI: a registered prefix plus a local name, e.g. `cem:Method`.
struct Iri {
  std::string prefix;
  std::string local;

  Iri() = default;
  Iri(std::string p, std::string l);

  /// Parses `prefix:local`. Throws InvalidTerm on malformed input.
  static Iri parse(std::string_view curie);

  std::string str() const { return prefix + ":" + local; }

  auto operator<=>(const Iri&) const = default;
  bool operator==(const Iri&) const = default;
};

enum class Datatype { String, Integer, Float, Boolean };

std::string_view datatype_name(Datatype dt);

struct Literal {
  std::string lexical;
  Datatype datatype = Datatype::String;

  Literal() = default;
  /// Validates the lexical form against the datatype. Throws InvalidTerm.
  Literal(std::string lex, Datatype dt);

  static Literal string(std::string s) { return {std::move(s), Datatype::String}; }
  static Literal integer(std::int64_t v) { return {std::to_string(v), Datatype::Integer}; }
  static Literal floating(double v);
  static Literal boolean(bool v) { return {v ? "true" : "false", Datatype::Boolean}; }

  bool is_numeric() const { return datatype == Datatype::Integer || datatype == Datatype::Float; }
  double as_double() const;
  std::int64_t as_int() const;

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;
};

using Term = std::variant<Iri, Literal>;

inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
std::string term_to_string(const Term& t);

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

/// Maps short prefixes to namespace IRIs. Comes pre-loaded with the
/// namespaces the workbench itself uses.
class PrefixTable {
public:
  PrefixTable();

  void add(const std::string& prefix, const std::string& ns);
  bool contains(std::string_view prefix) const;
  const std::string& ns(std::string_view prefix) const;
  std::string expand(const Iri& iri) const;
  /// Longest-namespace match of an absolute IRI back to prefix form.
  std::optional<Iri> compact(std::string_view absolute) const;
  void require(const Iri& iri) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return table_; }

private:
  std::map<std::string, std::string, std::less<>> table_;
};

// 64-bit FNV-1a, used for content-addressed skolem IRIs.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
/// Deterministic IRI in `prefix` derived from the parts' contents.
Iri skolem(std::string_view prefix, std::string_view kind, const std::vector<std::string>& parts);

}  // namespace modelforge::kg
