#include "modelforge/augtype/augtype.hpp"

#include "../textex/words.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace modelforge::augtype {

namespace detail = textex::detail;

namespace {

struct Candidate {
  int rule = 0;
  int distance = 0;
  bool below = false;
  int line = 0;
  std::size_t column = 0;
  kg::Iri concept_iri;

  auto key() const { return std::tie(rule, distance, below, line, column); }
};

struct LineWords {
  std::string_view text;
  std::vector<detail::Word> words;

  std::string_view at(std::size_t i) const { return text.substr(words[i].start, words[i].end - words[i].start); }
  std::string lower_at(std::size_t i) const { return detail::lower(at(i)); }
  bool spaced(std::size_t i) const {  // only blanks between word i and i + 1
    for (std::size_t k = words[i].end; k < words[i + 1].start; ++k) {
      if (text[k] != ' ' && text[k] != '\t') return false;
    }
    return true;
  }
  std::size_t index_starting_at(std::size_t pos) const {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i].start == pos) return i;
    }
    return words.size();
  }
};

bool determiner(const std::string& w) { return w == "the" || w == "a" || w == "an"; }

// Matches of the three rules on one line.
void scan_line(const LineWords& lw, const std::vector<const textex::ConceptMention*>& mentions,
               const std::set<std::string>& vars, int line, int distance, bool below,
               std::map<std::string, Candidate>& best) {
  auto offer = [&](std::string var, int rule, std::size_t column, const kg::Iri& iri) {
    Candidate c{rule, distance, below, line, column, iri};
    auto [it, fresh] = best.try_emplace(std::move(var), c);
    if (!fresh && c.key() < it->second.key()) it->second = c;
  };
  auto is_var = [&](std::size_t i) { return i < lw.words.size() && vars.count(std::string(lw.at(i))); };

  for (const auto* m : mentions) {
    std::size_t first = lw.index_starting_at(m->start);
    std::size_t last = first;
    while (last < lw.words.size() && lw.words[last].end < m->end) ++last;
    if (first >= lw.words.size() || last >= lw.words.size()) continue;

    // R1: CONCEPT TOKEN
    if (last + 1 < lw.words.size() && lw.spaced(last) && is_var(last + 1))
      offer(std::string(lw.at(last + 1)), 1, m->start, *m->iri);

    // R2: TOKEN is [the|a|an] CONCEPT
    std::size_t k = first;
    if (k >= 1 && determiner(lw.lower_at(k - 1)) && lw.spaced(k - 1)) --k;
    if (k >= 2 && lw.lower_at(k - 1) == "is" && lw.spaced(k - 1) && lw.spaced(k - 2) && is_var(k - 2))
      offer(std::string(lw.at(k - 2)), 2, lw.words[k - 2].start, *m->iri);

    // R3: CONCEPT is defined as TOKEN
    std::size_t n = last;
    if (n + 4 < lw.words.size() && lw.lower_at(n + 1) == "is" && lw.lower_at(n + 2) == "defined" &&
        lw.lower_at(n + 3) == "as" && lw.spaced(n) && lw.spaced(n + 1) && lw.spaced(n + 2) && lw.spaced(n + 3) &&
        is_var(n + 4))
      offer(std::string(lw.at(n + 4)), 3, m->start, *m->iri);
  }
}

AugmentedType type_of(const kg::Iri& iri, const textex::ConceptDictionary& dict) {
  if (const auto* e = dict.entry(iri)) return {iri, e->preferred_name, e->units};
  return {iri, iri.local, {}};
}

std::vector<VariableBinding> finish(const std::map<std::string, Candidate>& best, const textex::ConceptDictionary& dict) {
  static const char* rules[] = {"", kConceptToken, kTokenIsConcept, kConceptDefinedAs};
  std::vector<VariableBinding> out;
  for (const auto& [var, c] : best) out.push_back({var, type_of(c.concept_iri, dict), c.line, rules[c.rule]});
  return out;
}

}  // namespace

std::vector<VariableBinding> extract_augmented_types(const textex::EquationSpan& span, const eqc::CompiledEquation& eq,
                                                     const textex::DocumentText& doc,
                                                     const std::vector<textex::ConceptMention>& mentions,
                                                     const textex::ConceptDictionary& dict, int window) {
  std::set<std::string> vars;
  for (const auto& v : eqc::free_variables(eq.lhs)) vars.insert(v);
  for (const auto& v : eqc::free_variables(eq.rhs)) vars.insert(v);

  int lo = std::max(1, span.first_line - window);
  int hi = std::min(doc.line_count(), span.last_line + window);
  std::map<std::string, Candidate> best;
  for (int n = lo; n <= hi; ++n) {
    std::vector<const textex::ConceptMention*> on_line;
    for (const auto& m : mentions) {
      if (m.line == n && m.iri && m.doc_id == doc.id) on_line.push_back(&m);
    }
    if (on_line.empty()) continue;
    LineWords lw{doc.line(n), detail::words(doc.line(n))};
    int distance = n < span.first_line ? span.first_line - n : n > span.last_line ? n - span.last_line : 0;
    scan_line(lw, on_line, vars, n, distance, n > span.last_line, best);
  }
  return finish(best, dict);
}

std::vector<VariableBinding> bindings_from_comment(const eqc::FunctionDef& fn, std::string_view comment,
                                                   const textex::ConceptDictionary& dict) {
  std::set<std::string> vars(fn.inputs.begin(), fn.inputs.end());
  vars.insert(fn.output);
  auto doc = textex::DocumentText::from_text("comment", comment);
  auto mentions = textex::extract_concepts(doc, dict);
  std::map<std::string, Candidate> best;
  for (int n = 1; n <= doc.line_count(); ++n) {
    std::vector<const textex::ConceptMention*> on_line;
    for (const auto& m : mentions) {
      if (m.line == n) on_line.push_back(&m);
    }
    LineWords lw{doc.line(n), detail::words(doc.line(n))};
    scan_line(lw, on_line, vars, n, 0, false, best);
  }
  return finish(best, dict);
}

std::string_view datatype_name(DataType t) {
  switch (t) {
    case DataType::Float: return "float";
    case DataType::Integer: return "integer";
    case DataType::Boolean: return "boolean";
    case DataType::String: return "string";
  }
  return "float";
}

Descriptors to_data_descriptors(const eqc::FunctionDef& fn, const std::vector<VariableBinding>& bindings) {
  std::map<std::string, const VariableBinding*> by_var;
  for (const auto& b : bindings) by_var.try_emplace(b.variable, &b);
  Descriptors d;
  auto make = [&](const std::string& name) {
    DataDescriptor dd{name, DataType::Float, std::nullopt};
    if (auto it = by_var.find(name); it != by_var.end()) {
      dd.augmented_type = it->second->type;
    } else {
      d.missing.push_back(name);
    }
    return dd;
  };
  for (const auto& in : fn.inputs) d.inputs.push_back(make(in));
  d.output = make(fn.output);
  return d;
}

}  // namespace modelforge::augtype
