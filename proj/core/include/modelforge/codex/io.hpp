#pragma once

#include "modelforge/kg/graph.hpp"

#include <set>
#include <stdexcept>

namespace modelforge::codex {

class CodexError : public std::runtime_error {
public:
  enum class Code { MalformedCodeModel, UnsupportedConstruct, UnknownMethod };

  CodexError(Code code, const std::string& message, int line = 0, std::string construct = {})
      : std::runtime_error(message), code_(code), line_(line), construct_(std::move(construct)) {}

  Code code() const noexcept { return code_; }
  int line() const noexcept { return line_; }
  const std::string& construct() const noexcept { return construct_; }

private:
  Code code_;
  int line_;
  std::string construct_;
};

struct MethodIoReport {
  kg::Iri method;
  std::vector<std::string> explicit_params;
  std::set<std::string> implicit_inputs;
  std::set<std::string> implicit_outputs;
  std::vector<std::pair<std::string, kg::Literal>> constants;  // by name
  std::vector<std::pair<std::string, int>> dead_assignments;   // (variable, line), by line
  std::vector<std::pair<int, int>> unreachable;                 // line ranges

  bool operator==(const MethodIoReport&) const = default;
};

struct IoOptions {
  /// Report fields (and unresolved names) written in the method as outputs.
  bool field_outputs = true;
};

/// Implicit input/output analysis over one method's code-graph triples.
///
/// A variable's first reference (by sequence, declarations without a value
/// skipped) decides whether it is an implicit input: a read of something that
/// is not a parameter means the value came from outside. Fields written in
/// the method are outputs. A local assigned once, from a literal, is a
/// constant. A write to a non-output that is not read before something
/// overwrites it on every path is dead, unless a read of it inside the same loop can see it on the next
/// iteration. Statements following a return in the same block are
/// unreachable, and their references are left out of the analysis.
MethodIoReport infer_io(const kg::Graph& code, const kg::Iri& method, const IoOptions& options = {});

}  // namespace modelforge::codex
