#pragma once

#include "modelforge/textex/concepts.hpp"

namespace modelforge::textex {

struct EquationSpan {
  std::string doc_id;
  int first_line = 0;
  int last_line = 0;
  std::string raw;

  bool operator==(const EquationSpan&) const = default;
};

struct DetectorConfig {
  /// Minimum share of characters that may appear in an equation.
  double legal_ratio = 0.9;
};

/// Finds equations in prose. Each line is cut at prose boundaries (`:` `;`
/// `,` `?` `!` and sentence-ending periods) and every piece is tested whole:
/// exactly one `=`, something on both sides, at least one identifier,
/// balanced brackets and enough equation-legal characters. Lines starting
/// with an operator continue the equation on the line above.
std::vector<EquationSpan> detect_equations(const DocumentText& doc, const DetectorConfig& config = {});

/// Share of equation-legal characters in `text`. Words count as legal when
/// they look like variables: short names, names with digits, underscores or
/// inner capitals, Greek letter names and the function words. Ordinary
/// English words do not.
double legal_ratio(std::string_view text);

/// Phrases in the window around each equation that name one of its
/// variables ("the molecular weight mw"), as unresolved pattern mentions.
/// They feed alignment and curation for concepts the dictionary lacks.
std::vector<ConceptMention> extract_pattern_concepts(const DocumentText& doc, const std::vector<EquationSpan>& equations,
                                                     int window = 3);

}  // namespace modelforge::textex
