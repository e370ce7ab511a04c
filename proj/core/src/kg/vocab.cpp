#include "modelforge/kg/vocab.hpp"

#include <algorithm>

namespace modelforge::kg::vocab {

namespace {

const Iri xsd_string{"xsd", "string"};
const Iri xsd_integer{"xsd", "integer"};
const Iri xsd_double{"xsd", "double"};
const Iri xsd_boolean{"xsd", "boolean"};

Vocabulary make_cem() {
  using namespace cem;
  Vocabulary v;
  v.name = "Code Extraction Meta-model";
  v.classes = {CodeBlock, Class, Method, ConditionalBlock, LoopBlock, MethodCall, CodeVariable,
               Statement, Reference, Comment};
  v.subclasses = {{Method, CodeBlock}, {ConditionalBlock, CodeBlock}, {LoopBlock, CodeBlock}, {Class, CodeBlock}};
  v.properties = {
      {arguments, Method, CodeVariable},
      {returnTypes, Method, xsd_string},
      {calls, Method, Method},
      {isCalled, Method, Method},
      {beginsAt, CodeBlock, xsd_integer},
      {endsAt, CodeBlock, xsd_integer},
      {serialization, CodeBlock, xsd_string},
      {containedIn, CodeBlock, CodeBlock},
      {name, CodeBlock, xsd_string},
      {file, CodeBlock, xsd_string},
      {package, Class, xsd_string},
      {datatype, CodeVariable, xsd_string},
      {scope, CodeVariable, xsd_string},
      {argumentIndex, CodeVariable, xsd_integer},
      {inMethod, Statement, Method},
      {inStatement, Reference, Statement},
      {inLoop, Statement, LoopBlock},
      {statementIndex, Statement, xsd_integer},
      {statementKind, Statement, xsd_string},
      {hasOperator, Statement, xsd_string},
      {refersTo, Reference, CodeVariable},
      {usage, Reference, xsd_string},
      {context, Reference, xsd_string},
      {sequence, Reference, xsd_integer},
      {lineNumber, Reference, xsd_integer},
      {assignedLiteral, Reference, xsd_string},
      {callee, MethodCall, xsd_string},
      {invokes, MethodCall, Method},
      {text, Comment, xsd_string},
      {commentOf, Comment, CodeBlock},
      {branch, Statement, xsd_string},
  };
  return v;
}

Vocabulary make_sci() {
  using namespace sci;
  Vocabulary v;
  v.name = "Scientific meta-model";
  v.classes = {ScientificConcept, UnittedQuantity, Equation, ExternalEquation, DataDescriptor};
  v.subclasses = {{UnittedQuantity, ScientificConcept}, {ExternalEquation, Equation}};
  v.properties = {
      {value, UnittedQuantity, xsd_double},
      {unit, UnittedQuantity, xsd_string},
      {arguments, Equation, DataDescriptor},
      {returnTypes, Equation, DataDescriptor},
      {name, DataDescriptor, xsd_string},
      {datatype, DataDescriptor, xsd_string},
      {augmentedType, DataDescriptor, ScientificConcept},
      {argumentIndex, DataDescriptor, xsd_integer},
      {expression, Equation, xsd_string},
      {functionName, Equation, xsd_string},
      {functionText, Equation, xsd_string},
      {functionIR, Equation, xsd_string},
      {derivedFrom, Equation, xsd_string},
  };
  return v;
}

}  // namespace

std::vector<Triple> Vocabulary::triples() const {
  std::vector<Triple> out;
  for (const auto& c : classes) out.push_back({c, rdf::type, owl::Class});
  for (const auto& [sub, sup] : subclasses) out.push_back({sub, rdfs::subClassOf, sup});
  for (const auto& p : properties) {
    bool is_data = p.range.prefix == "xsd";
    out.push_back({p.property, rdf::type, is_data ? owl::DatatypeProperty : owl::ObjectProperty});
    out.push_back({p.property, rdfs::domain, p.domain});
    out.push_back({p.property, rdfs::range, p.range});
  }
  return out;
}

bool Vocabulary::resolves(const Iri& iri) const {
  if (std::find(classes.begin(), classes.end(), iri) != classes.end()) return true;
  return std::any_of(properties.begin(), properties.end(), [&](const PropertyDecl& p) { return p.property == iri; });
}

const Vocabulary& code_extraction_model() {
  static const Vocabulary v = make_cem();
  return v;
}

const Vocabulary& scientific_model() {
  static const Vocabulary v = make_sci();
  return v;
}

}  // namespace modelforge::kg::vocab
