#include "modelforge/api/ce.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iomanip>
#include <sstream>

namespace modelforge::api {

namespace {

enum class Tok { Word, Quoted, Number, Equals, Comma, Period, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' || c == '/' || c == '#' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool number_start(std::string_view s, std::size_t i) {
  if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) return true;
  return i + 1 < s.size() && (s[i] == '-' || s[i] == '+') &&
         (std::isdigit(static_cast<unsigned char>(s[i + 1])) ||
          (s[i + 1] == '.' && i + 2 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 2]))));
}

// Length of the number starting at i. A period belongs to the number only
// when a digit follows it, so "T=300." ends the command.
std::size_t number_length(std::string_view s, std::size_t i) {
  std::size_t j = i;
  auto digits = [&] {
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
  };
  if (s[j] == '-' || s[j] == '+') ++j;
  digits();
  if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
    ++j;
    digits();
  }
  if (j + 1 < s.size() && (s[j] == 'e' || s[j] == 'E')) {
    std::size_t k = j + 1;
    if (k < s.size() && (s[k] == '-' || s[k] == '+')) ++k;
    if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
      j = k;
      digits();
    }
  }
  return j - i;
}

[[noreturn]] void fail(std::size_t pos, const std::string& expected, const std::string& found) {
  throw ApiError(ApiError::Code::CEParseError,
                 "at " + std::to_string(pos) + ": expected " + expected + ", found " + found, pos, expected);
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::string text;
      std::size_t start = i++;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        text += s[i++];
      }
      if (i >= s.size()) fail(start, "closing quote", "end of input");
      ++i;
      out.push_back({Tok::Quoted, text, start});
    } else if (number_start(s, i)) {
      std::size_t n = number_length(s, i);
      out.push_back({Tok::Number, std::string(s.substr(i, n)), i});
      i += n;
    } else if (c == '=') {
      out.push_back({Tok::Equals, "=", i++});
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", i++});
    } else if (c == '.') {
      out.push_back({Tok::Period, ".", i++});
    } else if (word_char(c)) {
      std::size_t start = i;
      while (i < s.size() && word_char(s[i])) ++i;
      out.push_back({Tok::Word, std::string(s.substr(start, i - start)), start});
    } else {
      fail(i, "a word, number or quoted text", std::string("'") + c + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_item_id(const std::string& w) {
  auto u = w.find('_');
  if (u == std::string::npos || u == 0 || u + 1 == w.size()) return false;
  for (std::size_t i = 0; i < u; ++i) {
    if (!std::isupper(static_cast<unsigned char>(w[i]))) return false;
  }
  for (std::size_t i = u + 1; i < w.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(w[i]))) return false;
  }
  return true;
}

class Parser {
public:
  Parser(std::string_view text, const Workbench* wb) : toks_(lex(text)), wb_(wb) {}

  CEStatement statement() {
    const Token& t = peek();
    if (t.kind != Tok::Word) fail(t.pos, "a command", describe(t));
    std::string kw = lower(t.text);
    CEStatement out;
    if (kw == "show") {
      next();
      if (accept_kw("pending")) {
        out = ce::ShowPending{};
      } else if (accept_kw("equation")) {
        out = ce::ShowEquation{item_id()};
      } else {
        fail(peek().pos, "'pending' or 'equation'", describe(peek()));
      }
    } else if (kw == "accept") {
      next();
      out = ce::Accept{item_id()};
    } else if (kw == "reject") {
      next();
      ce::Reject r{item_id(), {}};
      expect_kw("because");
      r.reason = quoted("reason in quotes");
      out = r;
    } else if (kw == "set") {
      next();
      bool input = accept_kw("input");
      if (!input) expect_kw("output", "'input' or 'output'");
      std::string var = word("variable name");
      expect_kw("of");
      std::string id = item_id();
      expect_kw("to");
      std::string concept_name = concept_ref();
      if (input) {
        ce::SetInput s{var, id, concept_name, std::nullopt};
        if (accept_kw("with")) {
          expect_kw("unit");
          s.unit = quoted("unit in quotes");
        }
        out = s;
      } else {
        out = ce::SetOutput{var, id, concept_name};
      }
    } else if (kw == "align") {
      next();
      ce::Align a;
      const Token& m = peek();
      if (m.kind != Tok::Quoted) fail(m.pos, "concept name in quotes", describe(m));
      a.mention = next().text;
      check_concept(a.mention, m.pos);
      expect_kw("to");
      const Token& i = peek();
      if (i.kind != Tok::Word || i.text.find(':') == std::string::npos) fail(i.pos, "an IRI such as wd:Q11466", describe(i));
      a.iri = next().text;
      try {
        kg::Iri::parse(a.iri);
      } catch (const std::exception&) {
        fail(i.pos, "an IRI such as wd:Q11466", describe(i));
      }
      out = a;
    } else if (kw == "add") {
      next();
      expect_kw("concept");
      ce::AddConcept a;
      const Token& n = peek();
      if (n.kind == Tok::Quoted) {
        a.name = next().text;
      } else if (n.kind == Tok::Word) {
        a.name = concept_label(next().text);
      } else {
        fail(n.pos, "concept name", describe(n));
      }
      while (accept_kw("with")) {
        expect_kw("alias");
        a.aliases.push_back(quoted("alias in quotes"));
      }
      out = a;
    } else if (kw == "evaluate") {
      next();
      ce::Evaluate e{item_id(), {}};
      expect_kw("with");
      e.bindings = assignments();
      out = e;
    } else if (kw == "compute") {
      next();
      ce::Compute c{concept_ref(), {}};
      expect_kw("from");
      c.bindings = assignments();
      out = c;
    } else {
      fail(t.pos, "a command (show, accept, reject, set, align, add, evaluate, compute)", describe(t));
    }
    const Token& end = peek();
    if (end.kind != Tok::Period) fail(end.pos, "'.'", describe(end));
    next();
    if (peek().kind != Tok::End) fail(peek().pos, "end of command", describe(peek()));
    return out;
  }

private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::Period: return "'.'";
      case Tok::Quoted: return "\"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  bool accept_kw(const char* kw) {
    if (peek().kind == Tok::Word && lower(peek().text) == kw) {
      next();
      return true;
    }
    return false;
  }

  void expect_kw(const char* kw, std::string expected = {}) {
    if (!accept_kw(kw)) fail(peek().pos, expected.empty() ? "'" + std::string(kw) + "'" : expected, describe(peek()));
  }

  std::string word(const char* what) {
    if (peek().kind != Tok::Word) fail(peek().pos, what, describe(peek()));
    return next().text;
  }

  std::string quoted(const char* what) {
    if (peek().kind != Tok::Quoted) fail(peek().pos, what, describe(peek()));
    return next().text;
  }

  std::string item_id() {
    const Token& t = peek();
    if (t.kind != Tok::Word || !is_item_id(t.text)) fail(t.pos, "an item id such as EQ_7", describe(t));
    if (wb_ && !wb_->has_item(t.text)) throw ApiError(ApiError::Code::UnknownItem, "unknown item " + t.text, t.pos, "item id");
    return next().text;
  }

  void check_concept(const std::string& name, std::size_t pos) {
    if (wb_ && !wb_->resolve_concept(name))
      throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + name + "'", pos, "concept name");
  }

  std::string concept_ref() {
    const Token& t = peek();
    if (t.kind != Tok::Word && t.kind != Tok::Quoted) fail(t.pos, "concept name", describe(t));
    std::string name = next().text;
    check_concept(name, t.pos);
    return name;
  }

  std::vector<std::pair<std::string, double>> assignments() {
    std::vector<std::pair<std::string, double>> out;
    do {
      std::string var = word("variable name");
      if (peek().kind != Tok::Equals) fail(peek().pos, "'='", describe(peek()));
      next();
      const Token& n = peek();
      if (n.kind != Tok::Number) fail(n.pos, "a number", describe(n));
      double v = 0;
      const char* b = n.text.data() + (n.text[0] == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(b, n.text.data() + n.text.size(), v);
      if (ec != std::errc() || p != n.text.data() + n.text.size()) fail(n.pos, "a number", describe(n));
      next();
      out.emplace_back(var, v);
    } while (peek().kind == Tok::Comma && (next(), true));
    return out;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const Workbench* wb_;
};

std::string number(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

kg::Iri concept_iri(const Workbench& wb, const std::string& name) {
  auto c = wb.resolve_concept(name);
  if (!c) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + name + "'");
  return *c;
}

std::string describe_item(const CurationItem& it) {
  std::string out = it.id + " [" + std::string(kind_name(it.kind)) + ", " + std::string(status_name(it.status)) + "] ";
  if (const auto* e = std::get_if<EquationPayload>(&it.payload)) {
    out += e->raw;
    try {
      auto missing = missing_variables(*e);
      if (!missing.empty()) {
        out += "  missing:";
        for (const auto& m : missing) out += " " + m;
      }
    } catch (const eqc::EquationError& err) {
      out += "  (does not parse: " + std::string(err.what()) + ")";
    }
  } else if (const auto* a = std::get_if<AlignmentPayload>(&it.payload)) {
    out += "\"" + a->mention + "\"";
    if (!a->candidates.empty()) out += " ~ " + a->candidates.front().external.str() + " (" + number(a->candidates.front().dice_score) + ")";
  } else if (const auto* t = std::get_if<AugTypePayload>(&it.payload)) {
    out += t->variable + " : " + t->proposed.concept_iri.str();
  } else {
    out += "\"" + std::get<ConceptPayload>(it.payload).name + "\"";
  }
  return out;
}

}  // namespace

std::string concept_label(std::string_view name) {
  bool camel = !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c))) camel = false;
  }
  if (!camel) return std::string(name);
  std::vector<std::string> words{""};
  for (std::size_t i = 0; i < name.size(); ++i) {
    auto up = [&](std::size_t k) { return std::isupper(static_cast<unsigned char>(name[k])) != 0; };
    // A capital starts a word after a lowercase letter, or ends an acronym
    // when a lowercase letter follows: "ISPValue" -> "ISP value".
    if (i > 0 && up(i) && (!up(i - 1) || (i + 1 < name.size() && !up(i + 1)))) words.emplace_back();
    words.back() += name[i];
  }
  std::string out;
  for (auto& w : words) {
    bool acronym = w.size() > 1 && std::all_of(w.begin(), w.end(), [](char c) { return !std::islower(static_cast<unsigned char>(c)); });
    if (!acronym) w = lower(w);
    out += (out.empty() ? "" : " ") + w;
  }
  return out;
}

std::vector<std::string> split_commands(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\\' && quoted) {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '.' && !quoted && !(i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::string cmd(text.substr(start, i + 1 - start));
      auto b = cmd.find_first_not_of(" \t\r\n");
      if (b != std::string::npos) out.push_back(cmd.substr(b));
      start = i + 1;
    }
  }
  auto rest = text.substr(start);
  if (rest.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    std::string cmd(rest);
    out.push_back(cmd.substr(cmd.find_first_not_of(" \t\r\n")));
  }
  return out;
}

CEStatement parse_ce(std::string_view text, const Workbench* wb) { return Parser(text, wb).statement(); }

std::string run_ce(Workbench& wb, const CEStatement& stmt) {
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ce::ShowPending>) {
          auto items = wb.items(std::nullopt, ItemStatus::Pending);
          if (items.empty()) return "Nothing is pending.";
          std::string out;
          for (const auto& it : items) out += describe_item(it) + "\n";
          out.pop_back();
          return out;
        } else if constexpr (std::is_same_v<T, ce::ShowEquation>) {
          auto r = wb.equation(s.id);
          std::string out = r.id + " [" + std::string(status_name(r.status)) + "] " + r.raw;
          if (!r.parse_error.empty()) return out + "\n  does not parse: " + r.parse_error;
          for (const auto& [v, b] : r.bindings) out += "\n  " + v + " : " + b.type.concept_iri.str() + (b.curated ? " (curated)" : "");
          for (const auto& m : r.missing) out += "\n  " + m + " : ?";
          for (const auto& f : r.interpretations) out += "\n" + f.text;
          return out;
        } else if constexpr (std::is_same_v<T, ce::Accept>) {
          auto it = wb.accept(s.id);
          return it.id + " is " + std::string(status_name(it.status)) + ".";
        } else if constexpr (std::is_same_v<T, ce::Reject>) {
          auto it = wb.reject(s.id, s.reason);
          return it.id + " is rejected.";
        } else if constexpr (std::is_same_v<T, ce::SetInput>) {
          wb.set_binding(s.id, s.variable, concept_iri(wb, s.concept_name), s.unit, false);
          return "Input " + s.variable + " of " + s.id + " is " + s.concept_name + ".";
        } else if constexpr (std::is_same_v<T, ce::SetOutput>) {
          wb.set_binding(s.id, s.variable, concept_iri(wb, s.concept_name), std::nullopt, true);
          return "Output " + s.variable + " of " + s.id + " is " + s.concept_name + ".";
        } else if constexpr (std::is_same_v<T, ce::Align>) {
          auto it = wb.align(s.mention, kg::Iri::parse(s.iri));
          return "\"" + s.mention + "\" is aligned to " + s.iri + " (" + it.id + ").";
        } else if constexpr (std::is_same_v<T, ce::AddConcept>) {
          auto it = wb.add_concept(s.name, s.aliases);
          return "Concept \"" + s.name + "\" is proposed as " + it.id + ".";
        } else if constexpr (std::is_same_v<T, ce::Evaluate>) {
          eqc::Bindings b;
          for (const auto& [k, v] : s.bindings) b[k] = v;
          auto r = wb.evaluate(s.id, b);
          return r.output + " = " + number(r.value);
        } else {
          kg::Iri target = concept_iri(wb, s.concept_name);
          compose::Quantities given;
          for (const auto& [k, v] : s.bindings) {
            auto c = wb.resolve_concept(k);
            if (!c) c = wb.resolve_variable(k);
            if (!c) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + k + "'");
            given[*c] = v;
          }
          auto r = wb.compute(target, given);
          std::string out = s.concept_name + " = " + number(r.value);
          for (const auto& step : r.plan.steps) out += "\n  via " + step.card.model.str() + " (" + step.card.fn.name + ")";
          return out;
        }
      },
      stmt);
}

}  // namespace modelforge::api
