#pragma once

#include "modelforge/textex/concepts.hpp"

#include <filesystem>

namespace modelforge::textex {

/// Sørensen–Dice coefficient over character-bigram multisets of the
/// case-folded, whitespace-collapsed strings. Characters are code points.
/// Strings shorter than two characters score 1 when equal, else 0.
double dice(std::string_view a, std::string_view b);

inline constexpr double kAlignThreshold = 0.9;

struct AlignmentCandidate {
  kg::Iri external;
  std::string label;
  double dice_score = 0.0;

  bool operator==(const AlignmentCandidate&) const = default;
};

/// In-memory index over a vocabulary snapshot (`iri<TAB>label` lines,
/// already restricted to physical quantities). Immutable once built.
class AlignmentIndex {
public:
  AlignmentIndex() = default;
  explicit AlignmentIndex(std::vector<std::pair<kg::Iri, std::string>> labels);

  static AlignmentIndex load(const std::filesystem::path& tsv);
  static AlignmentIndex parse(std::string_view tsv);

  bool loaded() const { return !labels_.empty(); }
  std::size_t size() const { return labels_.size(); }

  /// Labels sharing at least one word with `name`, ranked by Dice score,
  /// then label, then IRI.
  std::vector<AlignmentCandidate> candidates(std::string_view name) const;

  /// The top candidate when it scores at least `threshold`.
  std::optional<AlignmentCandidate> align(std::string_view name, double threshold = kAlignThreshold) const;

private:
  std::vector<std::pair<kg::Iri, std::string>> labels_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_word_;
};

}  // namespace modelforge::textex
