#pragma once

#include "modelforge/codex/ast.hpp"
#include "modelforge/kg/term.hpp"

#include <set>
#include <span>

namespace modelforge::codex {

/// Classes left out of the code graph entirely (GUI widgets, applet glue).
struct IgnoreList {
  std::set<std::string, std::less<>> class_names;
  std::set<std::string, std::less<>> package_prefixes;

  bool ignores(std::string_view package, std::string_view class_name) const;

  /// One entry per line; `#` starts a comment. Entries containing a dot are
  /// package prefixes, bare words are class names.
  static IgnoreList parse(std::string_view text);
};

/// Lowers parsed units to code-graph triples. IRIs are content-addressed, so
/// the same sources always produce the same triples. Calls are resolved
/// across every unit passed in one batch.
std::vector<kg::Triple> lower_to_cem(std::span<const CompilationUnit> units, const IgnoreList& ignore);
std::vector<kg::Triple> lower_to_cem(const CompilationUnit& unit, const IgnoreList& ignore);

/// Subject IRIs the lowering uses, exposed so callers can address nodes.
kg::Iri class_iri(const std::string& path, const std::string& package, const std::string& name);
kg::Iri method_iri(const kg::Iri& cls, const MethodDecl& m);

}  // namespace modelforge::codex
