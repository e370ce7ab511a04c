#pragma once

#include "modelforge/api/workbench.hpp"

namespace modelforge::api {

/// Controlled-English commands. Every command ends with a period; keywords
/// are case-insensitive.
namespace ce {

struct ShowPending {};
struct ShowEquation {
  std::string id;
};
struct Accept {
  std::string id;
};
struct Reject {
  std::string id;
  std::string reason;
};
struct SetInput {
  std::string variable;
  std::string id;
  std::string concept_name;
  std::optional<std::string> unit;
};
struct SetOutput {
  std::string variable;
  std::string id;
  std::string concept_name;
};
struct Align {
  std::string mention;
  std::string iri;
};
struct AddConcept {
  std::string name;
  std::vector<std::string> aliases;
};
struct Evaluate {
  std::string id;
  std::vector<std::pair<std::string, double>> bindings;
};
struct Compute {
  std::string concept_name;
  std::vector<std::pair<std::string, double>> bindings;
};

}  // namespace ce

using CEStatement = std::variant<ce::ShowPending, ce::ShowEquation, ce::Accept, ce::Reject, ce::SetInput, ce::SetOutput,
                                 ce::Align, ce::AddConcept, ce::Evaluate, ce::Compute>;

/// Parses one command. With a workbench, item ids and concept names are
/// checked too (UnknownItem, UnknownConcept); without one only the grammar
/// is. Throws ApiError(CEParseError) carrying the offset and what was
/// expected there.
CEStatement parse_ce(std::string_view text, const Workbench* wb = nullptr);

/// Runs a command and returns the reply as text.
std::string run_ce(Workbench& wb, const CEStatement& stmt);

/// Splits input on command-ending periods (outside quotes and numbers).
std::vector<std::string> split_commands(std::string_view text);

/// Readable name for a concept name written as a CamelCase token:
/// "SpecificImpulse" -> "specific impulse". Quoted names pass through.
std::string concept_label(std::string_view name);

}  // namespace modelforge::api
