#pragma once

#include "modelforge/kg/term.hpp"

#include <vector>

// Shipped vocabularies: the Code Extraction Meta-model (cem) and the
// scientific meta-model (sci), plus the handful of standard terms we use.
namespace modelforge::kg::vocab {

namespace ns {
inline constexpr const char* rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr const char* rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr const char* xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr const char* owl = "http://www.w3.org/2002/07/owl#";
inline constexpr const char* skos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr const char* cem = "http://modelforge.dev/ns/cem#";
inline constexpr const char* sci = "http://modelforge.dev/ns/sci#";
inline constexpr const char* dom = "http://modelforge.dev/ns/domain#";
inline constexpr const char* mf = "http://modelforge.dev/ns/data#";
inline constexpr const char* cur = "http://modelforge.dev/ns/curation#";
inline constexpr const char* pq = "http://modelforge.dev/ns/pq#";
inline constexpr const char* graph = "http://modelforge.dev/graph/";
}  // namespace ns

namespace rdf {
inline const Iri type{"rdf", "type"};
}
namespace rdfs {
inline const Iri subClassOf{"rdfs", "subClassOf"};
inline const Iri label{"rdfs", "label"};
inline const Iri domain{"rdfs", "domain"};
inline const Iri range{"rdfs", "range"};
inline const Iri Class{"rdfs", "Class"};
inline const Iri comment{"rdfs", "comment"};
}  // namespace rdfs
namespace owl {
inline const Iri Class{"owl", "Class"};
inline const Iri ObjectProperty{"owl", "ObjectProperty"};
inline const Iri DatatypeProperty{"owl", "DatatypeProperty"};
}  // namespace owl
namespace skos {
inline const Iri prefLabel{"skos", "prefLabel"};
inline const Iri altLabel{"skos", "altLabel"};
inline const Iri exactMatch{"skos", "exactMatch"};
}  // namespace skos

namespace cem {
inline const Iri CodeBlock{"cem", "CodeBlock"};
inline const Iri Class{"cem", "Class"};
inline const Iri Method{"cem", "Method"};
inline const Iri ConditionalBlock{"cem", "ConditionalBlock"};
inline const Iri LoopBlock{"cem", "LoopBlock"};
inline const Iri MethodCall{"cem", "MethodCall"};
inline const Iri CodeVariable{"cem", "CodeVariable"};
inline const Iri Statement{"cem", "Statement"};
inline const Iri Reference{"cem", "Reference"};
inline const Iri Comment{"cem", "Comment"};

inline const Iri arguments{"cem", "arguments"};
inline const Iri returnTypes{"cem", "returnTypes"};
inline const Iri calls{"cem", "calls"};
inline const Iri isCalled{"cem", "isCalled"};
inline const Iri beginsAt{"cem", "beginsAt"};
inline const Iri endsAt{"cem", "endsAt"};
inline const Iri serialization{"cem", "serialization"};
inline const Iri containedIn{"cem", "containedIn"};

// Extension properties carried by the lowering.
inline const Iri name{"cem", "name"};
inline const Iri file{"cem", "file"};
inline const Iri package{"cem", "package"};
inline const Iri datatype{"cem", "datatype"};
inline const Iri scope{"cem", "scope"};
inline const Iri argumentIndex{"cem", "argumentIndex"};
inline const Iri inMethod{"cem", "inMethod"};
inline const Iri inStatement{"cem", "inStatement"};
inline const Iri inLoop{"cem", "inLoop"};
inline const Iri statementIndex{"cem", "statementIndex"};
inline const Iri statementKind{"cem", "statementKind"};
inline const Iri hasOperator{"cem", "hasOperator"};
inline const Iri refersTo{"cem", "refersTo"};
inline const Iri usage{"cem", "usage"};
inline const Iri context{"cem", "context"};
inline const Iri sequence{"cem", "sequence"};
inline const Iri lineNumber{"cem", "lineNumber"};
inline const Iri assignedLiteral{"cem", "assignedLiteral"};
inline const Iri callee{"cem", "callee"};
inline const Iri invokes{"cem", "invokes"};
inline const Iri text{"cem", "text"};
inline const Iri commentOf{"cem", "commentOf"};
inline const Iri branch{"cem", "branch"};
}  // namespace cem

namespace sci {
inline const Iri ScientificConcept{"sci", "ScientificConcept"};
inline const Iri UnittedQuantity{"sci", "UnittedQuantity"};
inline const Iri Equation{"sci", "Equation"};
inline const Iri ExternalEquation{"sci", "ExternalEquation"};
inline const Iri DataDescriptor{"sci", "DataDescriptor"};

inline const Iri value{"sci", "value"};
inline const Iri unit{"sci", "unit"};
inline const Iri arguments{"sci", "arguments"};
inline const Iri returnTypes{"sci", "returnTypes"};
inline const Iri name{"sci", "name"};
inline const Iri datatype{"sci", "datatype"};
inline const Iri augmentedType{"sci", "augmentedType"};

inline const Iri argumentIndex{"sci", "argumentIndex"};
inline const Iri expression{"sci", "expression"};
inline const Iri functionName{"sci", "functionName"};
inline const Iri functionText{"sci", "functionText"};
inline const Iri functionIR{"sci", "functionIR"};
inline const Iri derivedFrom{"sci", "derivedFrom"};
}  // namespace sci

struct PropertyDecl {
  Iri property;
  Iri domain;
  Iri range;
};

struct Vocabulary {
  std::string name;
  std::vector<Iri> classes;
  std::vector<PropertyDecl> properties;
  std::vector<std::pair<Iri, Iri>> subclasses;  // (sub, super)

  std::vector<Triple> triples() const;
  bool resolves(const Iri& iri) const;
};

const Vocabulary& code_extraction_model();
const Vocabulary& scientific_model();

}  // namespace modelforge::kg::vocab
