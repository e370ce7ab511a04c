#include "modelforge/textex/detect.hpp"

#include "words.hpp"

#include <algorithm>
#include <set>

namespace modelforge::textex {

using detail::lower;
using detail::trim;

namespace {

const std::set<std::string, std::less<>> kFunctionWords = {"sqrt", "exp", "log", "sin", "cos", "tan", "abs"};

const std::set<std::string, std::less<>> kVariableWords = {
    "alpha", "beta", "gamma", "gam", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda",
    "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "phi", "chi", "psi", "omega", "mdot"};

// Short words that are almost always English rather than a variable.
const std::set<std::string, std::less<>> kProseWords = {
    "the", "is", "of", "and", "to", "in", "on", "by", "we", "if", "as", "are", "be", "or", "at", "it", "an",
    "for", "so", "no", "not", "has", "was", "can", "its", "our", "but", "all", "any", "may", "per", "how",
    "why", "who", "you", "use", "see", "let", "get", "one", "two", "has", "had", "new", "now", "too"};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

bool variable_like(std::string_view w) {
  std::string lw = lower(w);
  if (kFunctionWords.count(lw) || kVariableWords.count(lw)) return true;
  for (char c : w) {
    if (is_digit(c) || c == '_' || static_cast<unsigned char>(c) >= 0x80) return true;
  }
  if (kProseWords.count(lw)) return false;
  if (w.size() <= 3) return true;
  bool has_lower = std::any_of(w.begin(), w.end(), is_lower);
  bool inner_upper = std::any_of(w.begin() + 1, w.end(), is_upper);
  return has_lower && inner_upper;
}

bool operator_char(char c) { return c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '='; }
bool bracket_char(char c) { return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}'; }

// A longer name written right against an operator or bracket ("tmax = ",
// "(Vesc") is taken as a variable even though it reads like a word.
bool next_to_operator(std::string_view s, std::size_t begin, std::size_t end) {
  auto mark = [](char c) { return operator_char(c) || bracket_char(c); };
  std::size_t i = begin;
  while (i > 0 && detail::is_space(s[i - 1])) --i;
  if (i > 0 && mark(s[i - 1])) return true;
  std::size_t j = end;
  while (j < s.size() && detail::is_space(s[j])) ++j;
  return j < s.size() && mark(s[j]);
}

struct Scan {
  std::size_t legal = 0;
  std::size_t total = 0;
  int identifiers = 0;
};

Scan scan(std::string_view s) {
  Scan r;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    unsigned char u = static_cast<unsigned char>(c);
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      // number with optional fraction and exponent
      std::size_t j = i;
      while (j < s.size() && (is_digit(s[j]) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && is_digit(s[k])) {
          j = k;
          while (j < s.size() && is_digit(s[j])) ++j;
        }
      }
      r.legal += j - i;
      r.total += j - i;
      i = j;
    } else if (detail::word_byte(u)) {
      std::size_t j = i;
      while (j < s.size() && detail::word_byte(static_cast<unsigned char>(s[j]))) ++j;
      std::string_view w = s.substr(i, j - i);
      if (variable_like(w) || (!kProseWords.count(lower(w)) && next_to_operator(s, i, j))) {
        r.legal += w.size();
        if (!kFunctionWords.count(lower(w))) ++r.identifiers;
      }
      r.total += w.size();
      i = j;
    } else {
      if (detail::is_space(c) || operator_char(c) || bracket_char(c) || c == '.') ++r.legal;
      ++r.total;
      ++i;
    }
  }
  return r;
}

bool balanced(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') {
      if (--depth < 0) return false;
    }
  }
  return depth == 0;
}

bool passes(std::string_view text, const DetectorConfig& config) {
  text = trim(text);
  auto eq = text.find('=');
  if (eq == std::string_view::npos || text.find('=', eq + 1) != std::string_view::npos) return false;
  if (eq > 0 && (text[eq - 1] == '<' || text[eq - 1] == '>' || text[eq - 1] == '!')) return false;
  if (trim(text.substr(0, eq)).empty() || trim(text.substr(eq + 1)).empty()) return false;
  if (!balanced(text)) return false;
  Scan sc = scan(text);
  if (sc.identifiers == 0 || sc.total == 0) return false;
  return static_cast<double>(sc.legal) / static_cast<double>(sc.total) >= config.legal_ratio;
}

struct Piece {
  std::size_t start;
  std::size_t end;
};

// Cuts a line at prose punctuation. A period ends a sentence unless a digit
// follows it.
std::vector<Piece> pieces(std::string_view line) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    bool cut = i == line.size();
    if (!cut) {
      char c = line[i];
      if (c == ':' || c == ';' || c == ',' || c == '?' || c == '!') cut = true;
      if (c == '.' && (i + 1 == line.size() || detail::is_space(line[i + 1]))) cut = true;
    }
    if (cut) {
      out.push_back({start, i});
      start = i + 1;
    }
  }
  return out;
}

bool continuation(std::string_view line) {
  line = trim(line);
  if (line.empty() || line.find('=') != std::string_view::npos) return false;
  char c = line.front();
  return operator_char(c) || c == ')' || c == ']' || c == '}';
}

}  // namespace

double legal_ratio(std::string_view text) {
  Scan sc = scan(text);
  return sc.total == 0 ? 1.0 : static_cast<double>(sc.legal) / static_cast<double>(sc.total);
}

std::vector<EquationSpan> detect_equations(const DocumentText& doc, const DetectorConfig& config) {
  std::vector<EquationSpan> out;
  for (int n = 1; n <= doc.line_count(); ++n) {
    std::string_view line = doc.line(n);
    auto ps = pieces(line);
    int consumed_to = n;
    for (std::size_t p = 0; p < ps.size(); ++p) {
      std::string_view text = line.substr(ps[p].start, ps[p].end - ps[p].start);
      std::string raw(trim(text));
      int last = n;
      bool ok = passes(raw, config);
      // A piece running to the end of its line may continue below.
      if (p + 1 == ps.size() && raw.find('=') != std::string::npos) {
        std::string joined = raw;
        for (int k = n + 1; k <= doc.line_count() && continuation(doc.line(k)); ++k) {
          std::string_view next = trim(doc.line(k));
          if (!next.empty() && next.back() == '.') next.remove_suffix(1);
          joined += ' ';
          joined += trim(next);
          if (passes(joined, config)) {
            raw = joined;
            last = k;
            ok = true;
          }
        }
      }
      if (!ok) continue;
      out.push_back({doc.id, n, last, std::string(trim(raw))});
      consumed_to = std::max(consumed_to, last);
    }
    n = consumed_to;
  }
  return out;
}

std::vector<ConceptMention> extract_pattern_concepts(const DocumentText& doc, const std::vector<EquationSpan>& equations,
                                                     int window) {
  static const std::set<std::string, std::less<>> determiners = {"the", "a", "an"};
  std::vector<ConceptMention> out;
  std::set<std::pair<int, std::size_t>> seen;
  for (const auto& eq : equations) {
    std::set<std::string> vars;
    for (const auto& w : detail::words(eq.raw)) {
      std::string_view t = std::string_view(eq.raw).substr(w.start, w.end - w.start);
      if (!is_digit(t.front()) && !kFunctionWords.count(lower(t))) vars.emplace(t);
    }
    int lo = std::max(1, eq.first_line - window);
    int hi = std::min(doc.line_count(), eq.last_line + window);
    for (int n = lo; n <= hi; ++n) {
      const std::string& line = doc.line(n);
      auto ws = detail::words(line);
      for (std::size_t i = 1; i < ws.size(); ++i) {
        std::string_view token = std::string_view(line).substr(ws[i].start, ws[i].end - ws[i].start);
        if (!vars.count(std::string(token))) continue;
        // Walk back over lowercase words (and inner "of") up to a determiner.
        std::size_t first = i;
        std::size_t count = 0;
        while (first > 0 && count < 5) {
          const auto& w = ws[first - 1];
          if (!detail::joinable(line, w.end, ws[first].start) || line[w.end] == '-') break;
          std::string word = lower(std::string_view(line).substr(w.start, w.end - w.start));
          if (determiners.count(word)) break;
          bool alpha = std::all_of(word.begin(), word.end(), is_lower);
          if (!alpha || word.size() < 2) {
            count = 0;
            break;
          }
          if (word != "of" && kProseWords.count(word)) {
            count = 0;
            break;
          }
          --first;
          ++count;
        }
        if (count == 0 || first == 0) continue;
        auto word_at = [&](std::size_t k) { return lower(std::string_view(line).substr(ws[k].start, ws[k].end - ws[k].start)); };
        if (!determiners.count(word_at(first - 1)) || word_at(first) == "of" || word_at(i - 1) == "of") continue;
        if (!seen.emplace(n, ws[first].start).second) continue;
        ConceptMention m;
        m.doc_id = doc.id;
        m.line = n;
        m.start = ws[first].start;
        m.end = ws[i - 1].end;
        m.surface = line.substr(m.start, m.end - m.start);
        m.source = MentionSource::Pattern;
        out.push_back(std::move(m));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ConceptMention& a, const ConceptMention& b) {
    return std::tie(a.line, a.start) < std::tie(b.line, b.start);
  });
  return out;
}

}  // namespace modelforge::textex
