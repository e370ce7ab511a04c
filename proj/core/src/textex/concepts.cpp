#include "modelforge/textex/concepts.hpp"
#include "modelforge/kg/vocab.hpp"

#include "words.hpp"

#include <algorithm>
#include <functional>

namespace modelforge::textex {

namespace vocab = kg::vocab;

DocumentText DocumentText::from_text(std::string id, std::string_view text) {
  DocumentText doc{std::move(id), {}};
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    doc.lines.emplace_back(line);
    pos = nl + 1;
  }
  return doc;
}

std::string phrase_key(std::string_view text) {
  std::string key;
  for (const auto& w : detail::words(text)) {
    if (!key.empty()) key += ' ';
    key += detail::lower(text.substr(w.start, w.end - w.start));
  }
  return key;
}

void ConceptDictionary::add(DictionaryEntry entry) {
  std::size_t slot;
  if (auto it = by_iri_.find(entry.canonical); it != by_iri_.end()) {
    slot = it->second;
    auto& have = entries_[slot].variants;
    for (auto& v : entry.variants) {
      if (std::find(have.begin(), have.end(), v) == have.end()) have.push_back(std::move(v));
    }
    auto& units = entries_[slot].units;
    for (auto& u : entry.units) {
      if (std::find(units.begin(), units.end(), u) == units.end()) units.push_back(std::move(u));
    }
  } else {
    if (entry.variants.empty() || entry.variants.front() != entry.preferred_name)
      entry.variants.insert(entry.variants.begin(), entry.preferred_name);
    slot = entries_.size();
    by_iri_.emplace(entry.canonical, slot);
    entries_.push_back(std::move(entry));
  }
  for (const auto& v : entries_[slot].variants) {
    std::string key = phrase_key(v);
    if (key.empty()) continue;
    by_key_.try_emplace(key, entries_[slot].canonical);
    longest_ = std::max(longest_, detail::words(key).size());
  }
}

std::optional<kg::Iri> ConceptDictionary::lookup(std::string_view phrase) const {
  auto it = by_key_.find(phrase_key(phrase));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

const DictionaryEntry* ConceptDictionary::entry(const kg::Iri& canonical) const {
  auto it = by_iri_.find(canonical);
  return it == by_iri_.end() ? nullptr : &entries_[it->second];
}

ConceptDictionary build_dictionary(const kg::Graph& ontology) {
  std::map<kg::Iri, std::vector<kg::Iri>> supers;
  for (const auto& t : ontology.find(std::nullopt, vocab::rdfs::subClassOf, std::nullopt)) {
    if (kg::is_iri(t.object)) supers[t.subject].push_back(std::get<kg::Iri>(t.object));
  }
  std::map<kg::Iri, bool> memo;
  std::function<bool(const kg::Iri&)> is_concept = [&](const kg::Iri& c) {
    if (c == vocab::sci::ScientificConcept) return true;
    auto [it, fresh] = memo.try_emplace(c, false);
    if (!fresh) return it->second;
    bool yes = false;
    for (const auto& s : supers[c]) yes = yes || is_concept(s);
    memo[c] = yes;
    return yes;
  };

  auto text = [&](const kg::Iri& c, const kg::Iri& p) {
    std::vector<std::string> out;
    for (const auto& o : ontology.objects(c, p)) {
      if (!kg::is_iri(o)) out.push_back(std::get<kg::Literal>(o).lexical);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  ConceptDictionary dict;
  std::vector<kg::Iri> classes;
  for (const auto& [c, s] : supers) {
    if (c.prefix != "sci" && is_concept(c)) classes.push_back(c);
  }
  for (const auto& c : classes) {
    auto pref = text(c, vocab::skos::prefLabel);
    if (pref.empty()) pref = text(c, vocab::rdfs::label);
    if (pref.empty())
      throw TextexError(TextexError::Code::MissingPreferredName, "concept " + c.str() + " has no preferred name");
    DictionaryEntry e{c, pref.front(), {pref.front()}, text(c, vocab::sci::unit)};
    for (auto& alias : text(c, vocab::skos::altLabel)) {
      if (!alias.empty() && alias != e.preferred_name) e.variants.push_back(std::move(alias));
    }
    dict.add(std::move(e));
  }
  return dict;
}

std::vector<ConceptMention> extract_concepts(const DocumentText& doc, const ConceptDictionary& dict) {
  std::vector<ConceptMention> out;
  if (dict.empty()) return out;
  for (int n = 1; n <= doc.line_count(); ++n) {
    const std::string& line = doc.line(n);
    auto ws = detail::words(line);
    for (std::size_t i = 0; i < ws.size();) {
      std::size_t matched = 0;
      std::optional<kg::Iri> hit;
      std::string key;
      std::size_t reach = std::min(dict.longest_variant(), ws.size() - i);
      // keys for every prefix length, then try the longest first
      std::vector<std::string> keys;
      for (std::size_t k = 0; k < reach; ++k) {
        if (k > 0 && !detail::joinable(line, ws[i + k - 1].end, ws[i + k].start)) break;
        if (k > 0) key += ' ';
        key += detail::lower(std::string_view(line).substr(ws[i + k].start, ws[i + k].end - ws[i + k].start));
        keys.push_back(key);
      }
      for (std::size_t k = keys.size(); k > 0 && !hit; --k) {
        if ((hit = dict.lookup(keys[k - 1]))) matched = k;
      }
      if (!hit) {
        ++i;
        continue;
      }
      ConceptMention m;
      m.start = ws[i].start;
      m.end = ws[i + matched - 1].end;
      m.surface = line.substr(m.start, m.end - m.start);
      m.doc_id = doc.id;
      m.line = n;
      m.iri = hit;
      m.source = MentionSource::Knowledge;
      out.push_back(std::move(m));
      i += matched;
    }
  }
  return out;
}

std::vector<MergedConcept> merge_concepts(const std::vector<ConceptMention>& a, const std::vector<ConceptMention>& b) {
  std::vector<MergedConcept> out;
  std::map<std::string, std::size_t> index;
  auto take = [&](const ConceptMention& m) {
    std::string key = detail::lower(detail::collapse_space(m.surface));
    auto [it, fresh] = index.try_emplace(key, out.size());
    if (fresh) {
      out.push_back({detail::collapse_space(m.surface), m.iri, m.source, {m}});
      return;
    }
    MergedConcept& c = out[it->second];
    if (!c.iri && m.iri) {
      c.iri = m.iri;
      c.source = m.source;
    }
    c.mentions.push_back(m);
  };
  for (const auto& m : a) take(m);
  for (const auto& m : b) take(m);
  return out;
}

}  // namespace modelforge::textex
