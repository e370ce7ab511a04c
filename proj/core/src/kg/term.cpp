#include "modelforge/kg/term.hpp"

#include "modelforge/kg/vocab.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace modelforge::kg {

namespace {

bool has_space(std::string_view s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return true;
  }
  return false;
}

bool valid_prefix(std::string_view p) {
  if (p.empty()) return false;
  for (char c : p) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Iri::Iri(std::string p, std::string l) : prefix(std::move(p)), local(std::move(l)) {
  if (!valid_prefix(prefix)) throw KgError(KgError::Code::InvalidTerm, "invalid IRI prefix '" + prefix + "'");
  if (local.empty() || has_space(local) || local.find('>') != std::string::npos)
    throw KgError(KgError::Code::InvalidTerm, "invalid IRI local name '" + local + "'");
}

Iri Iri::parse(std::string_view curie) {
  auto colon = curie.find(':');
  if (colon == std::string_view::npos)
    throw KgError(KgError::Code::InvalidTerm, "expected prefix:local, got '" + std::string(curie) + "'");
  return Iri(std::string(curie.substr(0, colon)), std::string(curie.substr(colon + 1)));
}

std::string_view datatype_name(Datatype dt) {
  switch (dt) {
    case Datatype::String: return "string";
    case Datatype::Integer: return "integer";
    case Datatype::Float: return "double";
    case Datatype::Boolean: return "boolean";
  }
  return "string";
}

Literal::Literal(std::string lex, Datatype dt) : lexical(std::move(lex)), datatype(dt) {
  auto bad = [&] {
    throw KgError(KgError::Code::InvalidTerm,
                  "'" + lexical + "' is not a valid " + std::string(datatype_name(datatype)) + " literal");
  };
  switch (datatype) {
    case Datatype::String: break;
    case Datatype::Integer: {
      std::int64_t v{};
      auto [p, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), v);
      if (ec != std::errc{} || p != lexical.data() + lexical.size() || lexical.empty()) bad();
      break;
    }
    case Datatype::Float: {
      double v{};
      auto [p, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), v);
      if (ec != std::errc{} || p != lexical.data() + lexical.size() || !std::isfinite(v)) bad();
      break;
    }
    case Datatype::Boolean:
      if (lexical != "true" && lexical != "false") bad();
      break;
  }
}

Literal Literal::floating(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {std::string(buf, p), Datatype::Float};
}

double Literal::as_double() const {
  double v = 0;
  std::from_chars(lexical.data(), lexical.data() + lexical.size(), v);
  return v;
}

std::int64_t Literal::as_int() const {
  if (datatype == Datatype::Float) return static_cast<std::int64_t>(as_double());
  std::int64_t v = 0;
  std::from_chars(lexical.data(), lexical.data() + lexical.size(), v);
  return v;
}

std::string term_to_string(const Term& t) {
  if (const auto* iri = std::get_if<Iri>(&t)) return iri->str();
  const auto& lit = std::get<Literal>(t);
  if (lit.datatype == Datatype::String) return "\"" + lit.lexical + "\"";
  return "\"" + lit.lexical + "\"^^xsd:" + std::string(datatype_name(lit.datatype));
}

PrefixTable::PrefixTable() {
  add("rdf", vocab::ns::rdf);
  add("rdfs", vocab::ns::rdfs);
  add("xsd", vocab::ns::xsd);
  add("owl", vocab::ns::owl);
  add("skos", vocab::ns::skos);
  add("cem", vocab::ns::cem);
  add("sci", vocab::ns::sci);
  add("dom", vocab::ns::dom);
  add("mf", vocab::ns::mf);
  add("cur", vocab::ns::cur);
  add("pq", vocab::ns::pq);
  add("graph", vocab::ns::graph);
}

void PrefixTable::add(const std::string& prefix, const std::string& ns) {
  if (!valid_prefix(prefix)) throw KgError(KgError::Code::InvalidTerm, "invalid prefix '" + prefix + "'");
  auto it = table_.find(prefix);
  if (it != table_.end() && it->second != ns)
    throw KgError(KgError::Code::InvalidTerm, "prefix '" + prefix + "' already bound to <" + it->second + ">");
  table_[prefix] = ns;
}

bool PrefixTable::contains(std::string_view prefix) const { return table_.find(prefix) != table_.end(); }

const std::string& PrefixTable::ns(std::string_view prefix) const {
  auto it = table_.find(prefix);
  if (it == table_.end()) throw KgError(KgError::Code::UnknownPrefix, "unknown prefix '" + std::string(prefix) + "'");
  return it->second;
}

std::string PrefixTable::expand(const Iri& iri) const { return ns(iri.prefix) + iri.local; }

std::optional<Iri> PrefixTable::compact(std::string_view absolute) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : table_) {
    const auto& nsv = entry.second;
    if (absolute.size() > nsv.size() && absolute.substr(0, nsv.size()) == nsv) {
      if (!best || nsv.size() > best->second.size()) best = &entry;
    }
  }
  if (!best) return std::nullopt;
  return Iri(best->first, std::string(absolute.substr(best->second.size())));
}

void PrefixTable::require(const Iri& iri) const {
  if (!contains(iri.prefix))
    throw KgError(KgError::Code::UnknownPrefix, "unknown prefix '" + iri.prefix + "' in " + iri.str());
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Iri skolem(std::string_view prefix, std::string_view kind, const std::vector<std::string>& parts) {
  std::uint64_t h = fnv1a(kind);
  for (const auto& p : parts) {
    h = fnv1a("\x1f", h);
    h = fnv1a(p, h);
  }
  return Iri(std::string(prefix), std::string(kind) + "_" + hex64(h));
}

}  // namespace modelforge::kg
