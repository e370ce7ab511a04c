#include "modelforge/textex/align.hpp"

#include "words.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace modelforge::textex {

namespace {

// Decodes UTF-8 leniently: a malformed byte stands for itself.
std::vector<char32_t> code_points(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : 0;
    if (i + static_cast<std::size_t>(extra) >= s.size()) extra = 0;
    char32_t cp = extra == 0 ? c : c & (0x3F >> extra);
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      unsigned char b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      cp = c;
      extra = 0;
    }
    out.push_back(cp);
    i += 1 + static_cast<std::size_t>(extra);
  }
  return out;
}

}  // namespace

double dice(std::string_view a, std::string_view b) {
  auto pa = code_points(detail::lower(detail::collapse_space(a)));
  auto pb = code_points(detail::lower(detail::collapse_space(b)));
  if (pa.size() < 2 || pb.size() < 2) return pa == pb ? 1.0 : 0.0;
  std::vector<std::pair<char32_t, char32_t>> ba, bb;
  for (std::size_t i = 0; i + 1 < pa.size(); ++i) ba.emplace_back(pa[i], pa[i + 1]);
  for (std::size_t i = 0; i + 1 < pb.size(); ++i) bb.emplace_back(pb[i], pb[i + 1]);
  std::sort(ba.begin(), ba.end());
  std::sort(bb.begin(), bb.end());
  std::size_t shared = 0;
  for (std::size_t i = 0, j = 0; i < ba.size() && j < bb.size();) {
    if (ba[i] < bb[j]) {
      ++i;
    } else if (bb[j] < ba[i]) {
      ++j;
    } else {
      ++shared, ++i, ++j;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(ba.size() + bb.size());
}

AlignmentIndex::AlignmentIndex(std::vector<std::pair<kg::Iri, std::string>> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    std::set<std::string> seen;
    for (const auto& w : detail::words(labels_[i].second)) {
      std::string word = detail::lower(std::string_view(labels_[i].second).substr(w.start, w.end - w.start));
      if (seen.insert(word).second) by_word_[word].push_back(i);
    }
  }
}

AlignmentIndex AlignmentIndex::parse(std::string_view tsv) {
  std::vector<std::pair<kg::Iri, std::string>> labels;
  std::istringstream in{std::string(tsv)};
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw TextexError(TextexError::Code::IndexUnavailable, "vocabulary line " + std::to_string(n) + ": expected iri<TAB>label");
    try {
      labels.emplace_back(kg::Iri::parse(line.substr(0, tab)), detail::collapse_space(line.substr(tab + 1)));
    } catch (const std::exception& e) {
      throw TextexError(TextexError::Code::IndexUnavailable, "vocabulary line " + std::to_string(n) + ": " + e.what());
    }
  }
  return AlignmentIndex(std::move(labels));
}

AlignmentIndex AlignmentIndex::load(const std::filesystem::path& tsv) {
  std::ifstream in(tsv, std::ios::binary);
  if (!in) throw TextexError(TextexError::Code::IndexUnavailable, "cannot read vocabulary " + tsv.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<AlignmentCandidate> AlignmentIndex::candidates(std::string_view name) const {
  if (!loaded()) throw TextexError(TextexError::Code::IndexUnavailable, "alignment index is empty");
  std::set<std::size_t> hits;
  for (const auto& w : detail::words(name)) {
    auto it = by_word_.find(detail::lower(name.substr(w.start, w.end - w.start)));
    if (it != by_word_.end()) hits.insert(it->second.begin(), it->second.end());
  }
  std::vector<AlignmentCandidate> out;
  for (std::size_t i : hits) out.push_back({labels_[i].first, labels_[i].second, dice(name, labels_[i].second)});
  std::sort(out.begin(), out.end(), [](const AlignmentCandidate& a, const AlignmentCandidate& b) {
    if (a.dice_score != b.dice_score) return a.dice_score > b.dice_score;
    if (a.label != b.label) return a.label < b.label;
    return a.external < b.external;
  });
  return out;
}

std::optional<AlignmentCandidate> AlignmentIndex::align(std::string_view name, double threshold) const {
  auto c = candidates(name);
  if (c.empty() || c.front().dice_score < threshold) return std::nullopt;
  return c.front();
}

}  // namespace modelforge::textex
