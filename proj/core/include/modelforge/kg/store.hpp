#pragma once

#include "modelforge/kg/graph.hpp"
#include "modelforge/kg/query.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <shared_mutex>

namespace modelforge::kg {

/// Writes a graph in the line format: `# graph <id>`, the `@prefix` header,
/// then one `<s> <p> <o> .` line per triple in sorted order.
void write_graph(std::ostream& out, const Iri& id, const Graph& g, const PrefixTable& prefixes);

struct LoadedGraph {
  Iri id;
  Graph graph;
};

/// Parses the line format. Header prefixes are registered into `prefixes`.
/// Throws ParseError carrying the offending line number.
LoadedGraph read_graph(std::istream& in, PrefixTable& prefixes, const Iri& default_id = {});

/// Named-graph triple store. Mutations take an exclusive lock; queries and
/// snapshots take a shared lock, so readers always see a consistent state.
class Store {
public:
  Store();

  void add_prefix(const std::string& prefix, const std::string& ns);
  PrefixTable prefixes() const;

  void create_graph(const Iri& id);
  bool has_graph(const Iri& id) const;
  std::vector<Iri> graph_ids() const;

  /// Returns the number of triples that were not already present.
  std::size_t insert(const Iri& graph, std::span<const Triple> triples);
  std::size_t insert(const Iri& graph, std::initializer_list<Triple> triples) {
    return insert(graph, std::span<const Triple>(triples.begin(), triples.size()));
  }
  std::size_t remove(const Iri& graph, std::span<const Triple> triples);
  void clear(const Iri& graph);

  Graph snapshot(const Iri& graph) const;
  std::size_t size(const Iri& graph) const;

  QueryResult query(const PatternQuery& q, const std::vector<Iri>& graphs) const;

  void save(const Iri& graph, const std::filesystem::path& path) const;
  /// Loads a graph file, replacing any graph with the same id.
  Iri load(const std::filesystem::path& path, const Iri& default_id = {});

private:
  const Graph& graph_locked(const Iri& id) const;
  Graph& graph_locked(const Iri& id);
  void check_prefixes_locked(const Triple& t) const;

  mutable std::shared_mutex mutex_;
  PrefixTable prefixes_;
  std::map<Iri, Graph> graphs_;
};

}  // namespace modelforge::kg
