#include "modelforge/api/curation.hpp"
#include "modelforge/api/error.hpp"

#include <nlohmann/json.hpp>

namespace modelforge::api {

using nlohmann::json;

std::string_view error_code_name(ApiError::Code code) {
  using C = ApiError::Code;
  switch (code) {
    case C::CEParseError: return "CEParseError";
    case C::UnknownConcept: return "UnknownConcept";
    case C::UnknownItem: return "UnknownItem";
    case C::AlreadyResolved: return "AlreadyResolved";
    case C::InvalidEdit: return "InvalidEdit";
    case C::Incomplete: return "Incomplete";
    case C::DuplicateConcept: return "DuplicateConcept";
    case C::MalformedRequest: return "MalformedRequest";
    case C::MalformedQuery: return "MalformedQuery";
    case C::NoPlan: return "NoPlan";
    case C::MissingBinding: return "MissingBinding";
    case C::DomainError: return "DomainError";
    case C::StoreCorrupt: return "StoreCorrupt";
    case C::BindFailure: return "BindFailure";
  }
  return "Error";
}

int http_status(ApiError::Code code) {
  using C = ApiError::Code;
  switch (code) {
    case C::UnknownItem: return 404;
    case C::AlreadyResolved:
    case C::DuplicateConcept: return 409;
    case C::InvalidEdit:
    case C::Incomplete:
    case C::NoPlan:
    case C::MissingBinding:
    case C::DomainError: return 422;
    case C::StoreCorrupt:
    case C::BindFailure: return 500;
    default: return 400;
  }
}

std::string_view kind_name(ItemKind k) {
  switch (k) {
    case ItemKind::Equation: return "equation";
    case ItemKind::Alignment: return "alignment";
    case ItemKind::AugType: return "augtype";
    case ItemKind::Concept: return "concept";
  }
  return "equation";
}

std::optional<ItemKind> parse_kind(std::string_view s) {
  for (auto k : {ItemKind::Equation, ItemKind::Alignment, ItemKind::AugType, ItemKind::Concept}) {
    if (kind_name(k) == s) return k;
  }
  return std::nullopt;
}

std::string_view status_name(ItemStatus s) {
  switch (s) {
    case ItemStatus::Pending: return "pending";
    case ItemStatus::Accepted: return "accepted";
    case ItemStatus::Rejected: return "rejected";
    case ItemStatus::Edited: return "edited";
  }
  return "pending";
}

namespace {

ItemStatus parse_status(std::string_view s) {
  for (auto st : {ItemStatus::Pending, ItemStatus::Accepted, ItemStatus::Rejected, ItemStatus::Edited}) {
    if (status_name(st) == s) return st;
  }
  throw ApiError(ApiError::Code::StoreCorrupt, "unknown item status " + std::string(s));
}

std::vector<std::string> strings(const json& j, const char* key) {
  return j.contains(key) ? j.at(key).get<std::vector<std::string>>() : std::vector<std::string>{};
}

}  // namespace

std::string_view id_prefix(ItemKind k) {
  switch (k) {
    case ItemKind::Equation: return "EQ";
    case ItemKind::Alignment: return "AL";
    case ItemKind::AugType: return "AT";
    case ItemKind::Concept: return "CO";
  }
  return "EQ";
}

std::vector<eqc::FunctionDef> interpretations(const EquationPayload& p) {
  if (p.function) {
    return {eqc::FunctionDef{p.function->name, p.function->inputs, p.function->output, eqc::from_sexpr(p.function->ir)}};
  }
  eqc::EquationSource src{p.doc_id, p.line};
  return eqc::parse_equation(p.raw, p.doc_id.empty() ? nullptr : &src).interpretations;
}

std::vector<std::string> variables(const EquationPayload& p) {
  if (p.function) {
    auto v = p.function->inputs;
    v.push_back(p.function->output);
    return v;
  }
  auto eq = eqc::parse_equation(p.raw);
  auto v = eqc::free_variables(eq.lhs);
  for (auto& r : eqc::free_variables(eq.rhs)) {
    if (std::find(v.begin(), v.end(), r) == v.end()) v.push_back(r);
  }
  return v;
}

std::vector<std::string> missing_variables(const EquationPayload& p) {
  std::vector<std::string> out;
  for (auto& v : variables(p)) {
    if (!p.bindings.count(v)) out.push_back(v);
  }
  return out;
}

json to_json(const augtype::AugmentedType& t) {
  return {{"concept", t.concept_iri.str()}, {"label", t.label}, {"units", t.units}};
}

augtype::AugmentedType augmented_type_from_json(const json& j) {
  return {kg::Iri::parse(j.at("concept").get<std::string>()), j.value("label", ""), strings(j, "units")};
}

json to_json(const CurationItem& item) {
  json j{{"id", item.id},
         {"kind", kind_name(item.kind)},
         {"status", status_name(item.status)},
         {"createdFrom", item.created_from}};
  if (!item.reason.empty()) j["reason"] = item.reason;
  json p;
  if (const auto* e = std::get_if<EquationPayload>(&item.payload)) {
    p = {{"raw", e->raw}, {"doc", e->doc_id}, {"line", e->line}};
    if (e->function) {
      p["function"] = {{"name", e->function->name},
                       {"inputs", e->function->inputs},
                       {"output", e->function->output},
                       {"ir", e->function->ir}};
    }
    json b = json::object();
    for (const auto& [v, t] : e->bindings) {
      json x = to_json(t.type);
      x["curated"] = t.curated;
      if (!t.rule.empty()) x["rule"] = t.rule;
      if (t.evidence_line) x["evidenceLine"] = t.evidence_line;
      b[v] = x;
    }
    p["bindings"] = b;
  } else if (const auto* a = std::get_if<AlignmentPayload>(&item.payload)) {
    json c = json::array();
    for (const auto& x : a->candidates) c.push_back({{"iri", x.external.str()}, {"label", x.label}, {"dice", x.dice_score}});
    p = {{"mention", a->mention}, {"doc", a->doc_id}, {"line", a->line}, {"candidates", c}};
    if (a->chosen) p["chosen"] = a->chosen->str();
  } else if (const auto* t = std::get_if<AugTypePayload>(&item.payload)) {
    p = {{"codeVariable", t->code_variable.str()},
         {"variable", t->variable},
         {"method", t->method.str()},
         {"proposed", to_json(t->proposed)}};
  } else {
    const auto& c = std::get<ConceptPayload>(item.payload);
    p = {{"name", c.name}, {"aliases", c.aliases}, {"units", c.units}};
  }
  j["payload"] = p;
  return j;
}

CurationItem item_from_json(const json& j) {
  CurationItem item;
  item.id = j.at("id").get<std::string>();
  auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw ApiError(ApiError::Code::StoreCorrupt, "unknown item kind in " + item.id);
  item.kind = *kind;
  item.status = parse_status(j.at("status").get<std::string>());
  item.created_from = j.value("createdFrom", "");
  item.reason = j.value("reason", "");
  const json& p = j.at("payload");
  switch (item.kind) {
    case ItemKind::Equation: {
      EquationPayload e;
      e.raw = p.at("raw").get<std::string>();
      e.doc_id = p.value("doc", "");
      e.line = p.value("line", 0);
      if (p.contains("function")) {
        const json& f = p["function"];
        e.function = CodeFunction{f.at("name").get<std::string>(), strings(f, "inputs"), f.at("output").get<std::string>(),
                                  f.at("ir").get<std::string>()};
      }
      const json bindings = p.value("bindings", json::object());
      for (const auto& [v, x] : bindings.items()) {
        e.bindings[v] = ProposedType{augmented_type_from_json(x), x.value("curated", false), x.value("rule", ""),
                                     x.value("evidenceLine", 0)};
      }
      item.payload = std::move(e);
      break;
    }
    case ItemKind::Alignment: {
      AlignmentPayload a;
      a.mention = p.at("mention").get<std::string>();
      a.doc_id = p.value("doc", "");
      a.line = p.value("line", 0);
      for (const auto& c : p.value("candidates", json::array())) {
        a.candidates.push_back(
            {kg::Iri::parse(c.at("iri").get<std::string>()), c.value("label", ""), c.value("dice", 0.0)});
      }
      if (p.contains("chosen")) a.chosen = kg::Iri::parse(p["chosen"].get<std::string>());
      item.payload = std::move(a);
      break;
    }
    case ItemKind::AugType:
      item.payload = AugTypePayload{kg::Iri::parse(p.at("codeVariable").get<std::string>()),
                                    p.at("variable").get<std::string>(), kg::Iri::parse(p.at("method").get<std::string>()),
                                    augmented_type_from_json(p.at("proposed"))};
      break;
    case ItemKind::Concept:
      item.payload = ConceptPayload{p.at("name").get<std::string>(), strings(p, "aliases"), strings(p, "units")};
      break;
  }
  return item;
}

}  // namespace modelforge::api
