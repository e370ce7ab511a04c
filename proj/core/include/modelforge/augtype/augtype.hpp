#pragma once

#include "modelforge/eqc/equation.hpp"
#include "modelforge/textex/detect.hpp"

namespace modelforge::augtype {

/// The domain meaning of a variable: a concept plus the units it may carry.
struct AugmentedType {
  kg::Iri concept_iri;
  std::string label;
  std::vector<std::string> units;

  bool operator==(const AugmentedType&) const = default;
};

/// Rule ids, in priority order.
inline constexpr const char* kConceptToken = "R1";   // "temperature T"
inline constexpr const char* kTokenIsConcept = "R2";  // "m is mass", "p is the pressure"
inline constexpr const char* kConceptDefinedAs = "R3";  // "mass is defined as m"

struct VariableBinding {
  std::string variable;
  AugmentedType type;
  int evidence_line = 0;
  std::string rule;

  bool operator==(const VariableBinding&) const = default;
};

inline constexpr int kWindow = 3;

/// Binds equation variables to concepts mentioned near the equation, in
/// lines [first - window, last + window]. Only variables of the equation are
/// bound. When several matches name the same variable the higher-priority
/// rule wins, then the line closest to the equation (above before below),
/// then the leftmost match. Output is ordered by variable name.
std::vector<VariableBinding> extract_augmented_types(const textex::EquationSpan& span, const eqc::CompiledEquation& eq,
                                                     const textex::DocumentText& doc,
                                                     const std::vector<textex::ConceptMention>& mentions,
                                                     const textex::ConceptDictionary& dict, int window = kWindow);

/// Same rules over a code comment, which is treated as one small document
/// whose window is the whole comment. `fn` supplies the variables.
std::vector<VariableBinding> bindings_from_comment(const eqc::FunctionDef& fn, std::string_view comment,
                                                   const textex::ConceptDictionary& dict);

enum class DataType { Float, Integer, Boolean, String };
std::string_view datatype_name(DataType t);

struct DataDescriptor {
  std::string name;
  DataType datatype = DataType::Float;
  std::optional<AugmentedType> augmented_type;

  bool operator==(const DataDescriptor&) const = default;
};

struct Descriptors {
  std::vector<DataDescriptor> inputs;
  DataDescriptor output;
  std::vector<std::string> missing;  // unbound names, inputs first then the output
};

Descriptors to_data_descriptors(const eqc::FunctionDef& fn, const std::vector<VariableBinding>& bindings);

}  // namespace modelforge::augtype
