#pragma once

#include "modelforge/kg/term.hpp"

#include <functional>
#include <optional>
#include <set>
#include <tuple>

namespace modelforge::kg {

/// A set of triples with subject-, predicate- and object-first indexes.
/// Insertion is idempotent and removal of an absent triple is a no-op.
class Graph {
public:
  using Visitor = std::function<void(const Triple&)>;

  bool insert(const Triple& t);
  bool erase(const Triple& t);
  bool contains(const Triple& t) const { return spo_.count(t) != 0; }
  std::size_t size() const { return spo_.size(); }
  bool empty() const { return spo_.empty(); }
  void clear();

  /// Visits every triple matching the bound positions, in index order.
  void match(const std::optional<Iri>& s, const std::optional<Iri>& p, const std::optional<Term>& o,
             const Visitor& visit) const;
  std::vector<Triple> find(const std::optional<Iri>& s, const std::optional<Iri>& p,
                           const std::optional<Term>& o) const;

  /// First object of (s, p, ?), if any.
  std::optional<Term> object(const Iri& s, const Iri& p) const;
  std::vector<Term> objects(const Iri& s, const Iri& p) const;
  std::vector<Iri> subjects(const Iri& p, const Term& o) const;

  const std::set<Triple>& triples() const { return spo_; }
  auto begin() const { return spo_.begin(); }
  auto end() const { return spo_.end(); }

  bool operator==(const Graph& other) const { return spo_ == other.spo_; }

private:
  std::set<Triple> spo_;
  std::set<std::tuple<Iri, Term, Iri>> pos_;
  std::set<std::tuple<Term, Iri, Iri>> osp_;
};

}  // namespace modelforge::kg
