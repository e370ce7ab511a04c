#pragma once

// Loads the Java fixture corpus and looks methods up by "Class.method".

#include "modelforge/codex/cem.hpp"
#include "modelforge/kg/graph.hpp"
#include "modelforge/kg/vocab.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace modelforge::testing {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path code_dir() { return std::filesystem::path(MODELFORGE_TEST_DATA) / "code"; }

inline std::vector<codex::CompilationUnit> load_corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(code_dir() / "src")) {
    if (e.path().extension() == ".java") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<codex::CompilationUnit> units;
  for (const auto& f : files) {
    codex::SourceUnit su;
    su.path = std::filesystem::relative(f, code_dir()).generic_string();
    su.text = read_file(f);
    units.push_back(codex::parse_source(su));
  }
  return units;
}

inline codex::IgnoreList corpus_ignore() { return codex::IgnoreList::parse(read_file(code_dir() / "ignore.txt")); }

inline kg::Graph corpus_graph(const std::vector<codex::CompilationUnit>& units) {
  kg::Graph g;
  for (const auto& t : codex::lower_to_cem(units, corpus_ignore())) g.insert(t);
  return g;
}

inline std::string lexical_of(const kg::Graph& g, const kg::Iri& s, const kg::Iri& p) {
  auto o = g.object(s, p);
  return o && !kg::is_iri(*o) ? std::get<kg::Literal>(*o).lexical : std::string();
}

/// "Class.method" for a method IRI.
inline std::string qualified_name(const kg::Graph& g, const kg::Iri& m) {
  namespace cem = kg::vocab::cem;
  auto cls = g.object(m, cem::containedIn);
  return lexical_of(g, std::get<kg::Iri>(*cls), cem::name) + "." + lexical_of(g, m, cem::name);
}

inline std::optional<kg::Iri> find_method(const kg::Graph& g, const std::string& qualified) {
  namespace cem = kg::vocab::cem;
  for (const auto& m : g.subjects(kg::vocab::rdf::type, cem::Method)) {
    if (qualified_name(g, m) == qualified) return m;
  }
  return std::nullopt;
}

}  // namespace modelforge::testing
