#pragma once

#include "modelforge/kg/graph.hpp"

#include <map>
#include <stdexcept>

namespace modelforge::textex {

/// A document as numbered lines. Line numbers are 1-based and never change.
struct DocumentText {
  std::string id;
  std::vector<std::string> lines;

  /// Splits on LF, dropping a trailing CR from each line.
  static DocumentText from_text(std::string id, std::string_view text);

  int line_count() const { return static_cast<int>(lines.size()); }
  const std::string& line(int n) const { return lines.at(static_cast<std::size_t>(n - 1)); }
};

class TextexError : public std::runtime_error {
public:
  enum class Code { MissingPreferredName, IndexUnavailable };

  TextexError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}
  Code code() const noexcept { return code_; }

private:
  Code code_;
};

struct DictionaryEntry {
  kg::Iri canonical;
  std::string preferred_name;
  std::vector<std::string> variants;  // preferred name first
  std::vector<std::string> units;
};

/// Case-insensitive phrase lookup over concept names. Phrases are compared
/// token by token, so "Gas  Constant" and "gas-constant" both hit
/// "gas constant".
class ConceptDictionary {
public:
  /// Adds an entry, or merges its variants into an existing entry with the
  /// same canonical IRI. A variant already owned by another concept stays
  /// with the earlier concept.
  void add(DictionaryEntry entry);

  std::optional<kg::Iri> lookup(std::string_view phrase) const;
  const DictionaryEntry* entry(const kg::Iri& canonical) const;

  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t longest_variant() const { return longest_; }

private:
  std::vector<DictionaryEntry> entries_;
  std::map<kg::Iri, std::size_t> by_iri_;
  std::map<std::string, kg::Iri, std::less<>> by_key_;
  std::size_t longest_ = 0;  // in tokens
};

/// One entry per concept class of the ontology: every class that reaches
/// sci:ScientificConcept through rdfs:subClassOf. Names come from
/// skos:prefLabel (falling back to rdfs:label) and skos:altLabel, units from
/// sci:unit. Entries are ordered by IRI.
ConceptDictionary build_dictionary(const kg::Graph& ontology);

enum class MentionSource { Knowledge, Pattern };

struct ConceptMention {
  std::string surface;
  std::string doc_id;
  int line = 0;
  std::size_t start = 0;  // byte offsets into the line, end exclusive
  std::size_t end = 0;
  std::optional<kg::Iri> iri;
  MentionSource source = MentionSource::Knowledge;

  bool operator==(const ConceptMention&) const = default;
};

/// Greedy longest-match gazetteer scan, left to right on each line. Matches
/// start and end on word boundaries and may only span whitespace or hyphens
/// between words.
std::vector<ConceptMention> extract_concepts(const DocumentText& doc, const ConceptDictionary& dict);

/// Lowercased words of `text` joined by single spaces; the key both the
/// dictionary and the scanner use.
std::string phrase_key(std::string_view text);

struct MergedConcept {
  std::string name;
  std::optional<kg::Iri> iri;
  MentionSource source = MentionSource::Knowledge;
  std::vector<ConceptMention> mentions;
};

/// Collapses mentions whose names are equal ignoring case, keeping the first
/// spelling seen and any canonical IRI. Order is first appearance, `a` before
/// `b`.
std::vector<MergedConcept> merge_concepts(const std::vector<ConceptMention>& a, const std::vector<ConceptMention>& b);

}  // namespace modelforge::textex
