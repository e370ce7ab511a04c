#pragma once

#include "modelforge/augtype/augtype.hpp"
#include "modelforge/textex/align.hpp"

#include <nlohmann/json_fwd.hpp>

#include <variant>

namespace modelforge::api {

enum class ItemKind { Equation, Alignment, AugType, Concept };
enum class ItemStatus { Pending, Accepted, Rejected, Edited };

std::string_view kind_name(ItemKind k);
std::optional<ItemKind> parse_kind(std::string_view s);
std::string_view status_name(ItemStatus s);
/// Id prefix: EQ, AL, AT, CO.
std::string_view id_prefix(ItemKind k);

struct ProposedType {
  augtype::AugmentedType type;
  bool curated = false;  // set by a curator rather than a rule
  std::string rule;      // rule id, empty when curated
  int evidence_line = 0;

  bool operator==(const ProposedType&) const = default;
};

/// A function recovered from source code; stands in for the parsed
/// equation when the item did not come from text.
struct CodeFunction {
  std::string name;
  std::vector<std::string> inputs;
  std::string output;
  std::string ir;  // eqc s-expression

  bool operator==(const CodeFunction&) const = default;
};

struct EquationPayload {
  std::string raw;
  std::string doc_id;
  int line = 0;
  std::optional<CodeFunction> function;
  std::map<std::string, ProposedType> bindings;  // variable -> type

  bool operator==(const EquationPayload&) const = default;
};

struct AlignmentPayload {
  std::string mention;
  std::string doc_id;
  int line = 0;
  std::vector<textex::AlignmentCandidate> candidates;
  std::optional<kg::Iri> chosen;

  bool operator==(const AlignmentPayload&) const = default;
};

struct AugTypePayload {
  kg::Iri code_variable;
  std::string variable;
  kg::Iri method;
  augtype::AugmentedType proposed;

  bool operator==(const AugTypePayload&) const = default;
};

struct ConceptPayload {
  std::string name;
  std::vector<std::string> aliases;
  std::vector<std::string> units;

  bool operator==(const ConceptPayload&) const = default;
};

using Payload = std::variant<EquationPayload, AlignmentPayload, AugTypePayload, ConceptPayload>;

struct CurationItem {
  std::string id;
  ItemKind kind = ItemKind::Equation;
  ItemStatus status = ItemStatus::Pending;
  std::string created_from;
  std::string reason;  // set on reject
  Payload payload;

  bool operator==(const CurationItem&) const = default;
};

/// The parsed form of an equation item: interpretations for text, or the
/// single code function. Throws eqc::EquationError for unparseable text.
std::vector<eqc::FunctionDef> interpretations(const EquationPayload& p);

/// Variables of the equation, in first-appearance order.
std::vector<std::string> variables(const EquationPayload& p);

/// Variables with no binding. Empty for a complete equation.
std::vector<std::string> missing_variables(const EquationPayload& p);

nlohmann::json to_json(const CurationItem& item);
CurationItem item_from_json(const nlohmann::json& j);

nlohmann::json to_json(const augtype::AugmentedType& t);
augtype::AugmentedType augmented_type_from_json(const nlohmann::json& j);

}  // namespace modelforge::api
