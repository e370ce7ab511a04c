#include "modelforge/kg/store.hpp"

#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace modelforge::kg {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

Iri datatype_iri(Datatype dt) { return Iri("xsd", std::string(datatype_name(dt))); }

std::string write_term(const Term& t, const PrefixTable& px) {
  if (const auto* iri = std::get_if<Iri>(&t)) return "<" + px.expand(*iri) + ">";
  const auto& lit = std::get<Literal>(t);
  return "\"" + escape(lit.lexical) + "\"^^<" + px.expand(datatype_iri(lit.datatype)) + ">";
}

class LineParser {
public:
  LineParser(std::string_view line, int lineno, const PrefixTable& px) : s_(line), lineno_(lineno), px_(px) {}

  Triple triple() {
    Iri s = iri();
    Iri p = iri();
    skip_ws();
    Term o = peek() == '"' ? Term{literal()} : Term{iri()};
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '.') fail("unterminated triple: missing final '.'");
    ++pos_;
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after '.'");
    return {std::move(s), std::move(p), std::move(o)};
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw KgError(KgError::Code::ParseError, "line " + std::to_string(lineno_) + ": " + what, lineno_);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::string_view absolute() {
    skip_ws();
    if (peek() != '<') fail("expected '<'");
    auto close = s_.find('>', pos_);
    if (close == std::string_view::npos) fail("unterminated IRI");
    auto abs = s_.substr(pos_ + 1, close - pos_ - 1);
    pos_ = close + 1;
    return abs;
  }

  Iri iri() {
    auto abs = absolute();
    auto c = px_.compact(abs);
    if (!c) fail("IRI <" + std::string(abs) + "> matches no declared prefix");
    return *c;
  }

  Literal literal() {
    ++pos_;  // opening quote
    std::string lex;
    bool closed = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '"') {
        closed = true;
        break;
      }
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        char e = s_[pos_++];
        switch (e) {
          case 'n': lex += '\n'; break;
          case 'r': lex += '\r'; break;
          case 't': lex += '\t'; break;
          case '"': lex += '"'; break;
          case '\\': lex += '\\'; break;
          default: fail(std::string("bad escape \\") + e);
        }
      } else {
        lex += c;
      }
    }
    if (!closed) fail("unterminated literal");
    if (s_.substr(pos_, 2) != "^^") fail("literal without datatype");
    pos_ += 2;
    Iri dt = iri();
    Datatype d;
    if (dt.prefix != "xsd") fail("unsupported datatype " + dt.str());
    if (dt.local == "string")
      d = Datatype::String;
    else if (dt.local == "integer")
      d = Datatype::Integer;
    else if (dt.local == "double")
      d = Datatype::Float;
    else if (dt.local == "boolean")
      d = Datatype::Boolean;
    else
      fail("unsupported datatype " + dt.str());
    try {
      return Literal(std::move(lex), d);
    } catch (const KgError& e) {
      fail(e.what());
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int lineno_;
  const PrefixTable& px_;
};

}  // namespace

void write_graph(std::ostream& out, const Iri& id, const Graph& g, const PrefixTable& prefixes) {
  if (!id.prefix.empty()) out << "# graph <" << prefixes.expand(id) << ">\n";
  for (const auto& [p, ns] : prefixes.entries()) out << "@prefix " << p << ": <" << ns << "> .\n";
  for (const auto& t : g) {
    out << write_term(Term{t.subject}, prefixes) << ' ' << write_term(Term{t.predicate}, prefixes) << ' '
        << write_term(t.object, prefixes) << " .\n";
  }
}

LoadedGraph read_graph(std::istream& in, PrefixTable& prefixes, const Iri& default_id) {
  LoadedGraph result;
  result.id = default_id;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw KgError(KgError::Code::ParseError, "line " + std::to_string(lineno) + ": " + what, lineno);
  };
  // Header IRIs are resolved after the prefix block has been read.
  std::string pending_id;
  bool in_header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') fail("CR line ending");
    std::string_view v(line);
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    if (v.empty()) continue;
    if (v.rfind("# graph <", 0) == 0) {
      auto close = v.find('>');
      if (close == std::string_view::npos) fail("unterminated graph IRI");
      pending_id = std::string(v.substr(9, close - 9));
      continue;
    }
    if (v.front() == '#') continue;
    if (v.rfind("@prefix", 0) == 0) {
      if (!in_header) fail("@prefix after the first triple");
      std::istringstream ps{std::string(v.substr(7))};
      std::string p, iri, dot;
      ps >> p >> iri >> dot;
      if (p.size() < 2 || p.back() != ':' || iri.size() < 2 || iri.front() != '<' || iri.back() != '>' ||
          dot != ".")
        fail("malformed @prefix line");
      try {
        prefixes.add(p.substr(0, p.size() - 1), iri.substr(1, iri.size() - 2));
      } catch (const KgError& e) {
        fail(e.what());
      }
      continue;
    }
    if (in_header) {
      in_header = false;
      if (!pending_id.empty()) {
        auto c = prefixes.compact(pending_id);
        if (!c) fail("graph IRI matches no declared prefix");
        result.id = *c;
      }
    }
    result.graph.insert(LineParser(v, lineno, prefixes).triple());
  }
  if (in_header && !pending_id.empty()) {
    auto c = prefixes.compact(pending_id);
    if (!c) throw KgError(KgError::Code::ParseError, "graph IRI matches no declared prefix", 1);
    result.id = *c;
  }
  return result;
}

Store::Store() = default;

void Store::add_prefix(const std::string& prefix, const std::string& ns) {
  std::unique_lock lock(mutex_);
  prefixes_.add(prefix, ns);
}

PrefixTable Store::prefixes() const {
  std::shared_lock lock(mutex_);
  return prefixes_;
}

void Store::create_graph(const Iri& id) {
  std::unique_lock lock(mutex_);
  prefixes_.require(id);
  graphs_.try_emplace(id);
}

bool Store::has_graph(const Iri& id) const {
  std::shared_lock lock(mutex_);
  return graphs_.count(id) != 0;
}

std::vector<Iri> Store::graph_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> out;
  for (const auto& [id, g] : graphs_) out.push_back(id);
  return out;
}

const Graph& Store::graph_locked(const Iri& id) const {
  auto it = graphs_.find(id);
  if (it == graphs_.end()) throw KgError(KgError::Code::UnknownGraph, "unknown graph " + id.str());
  return it->second;
}

Graph& Store::graph_locked(const Iri& id) {
  auto it = graphs_.find(id);
  if (it == graphs_.end()) throw KgError(KgError::Code::UnknownGraph, "unknown graph " + id.str());
  return it->second;
}

void Store::check_prefixes_locked(const Triple& t) const {
  prefixes_.require(t.subject);
  prefixes_.require(t.predicate);
  if (const auto* o = std::get_if<Iri>(&t.object)) prefixes_.require(*o);
}

std::size_t Store::insert(const Iri& graph, std::span<const Triple> triples) {
  std::unique_lock lock(mutex_);
  Graph& g = graph_locked(graph);
  for (const auto& t : triples) check_prefixes_locked(t);
  std::size_t n = 0;
  for (const auto& t : triples) n += g.insert(t) ? 1 : 0;
  return n;
}

std::size_t Store::remove(const Iri& graph, std::span<const Triple> triples) {
  std::unique_lock lock(mutex_);
  Graph& g = graph_locked(graph);
  std::size_t n = 0;
  for (const auto& t : triples) n += g.erase(t) ? 1 : 0;
  return n;
}

void Store::clear(const Iri& graph) {
  std::unique_lock lock(mutex_);
  graph_locked(graph).clear();
}

Graph Store::snapshot(const Iri& graph) const {
  std::shared_lock lock(mutex_);
  return graph_locked(graph);
}

std::size_t Store::size(const Iri& graph) const {
  std::shared_lock lock(mutex_);
  return graph_locked(graph).size();
}

QueryResult Store::query(const PatternQuery& q, const std::vector<Iri>& graphs) const {
  std::shared_lock lock(mutex_);
  std::vector<const Graph*> gs;
  for (const auto& id : graphs) gs.push_back(&graph_locked(id));
  return evaluate(q, gs);
}

void Store::save(const Iri& graph, const std::filesystem::path& path) const {
  std::shared_lock lock(mutex_);
  const Graph& g = graph_locked(graph);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw KgError(KgError::Code::IoFailure, "cannot write " + path.string());
  write_graph(out, graph, g, prefixes_);
  out.flush();
  if (!out) throw KgError(KgError::Code::IoFailure, "write failed for " + path.string());
}

Iri Store::load(const std::filesystem::path& path, const Iri& default_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KgError(KgError::Code::IoFailure, "cannot read " + path.string());
  std::unique_lock lock(mutex_);
  PrefixTable px = prefixes_;
  Iri fallback = default_id.prefix.empty() ? Iri("graph", path.stem().string()) : default_id;
  LoadedGraph lg = read_graph(in, px, fallback);
  prefixes_ = std::move(px);
  graphs_[lg.id] = std::move(lg.graph);
  return lg.id;
}

}  // namespace modelforge::kg
