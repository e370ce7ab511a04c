#include "modelforge/api/workbench.hpp"
#include "modelforge/api/ce.hpp"
#include "modelforge/codex/cem.hpp"
#include "modelforge/codex/translate.hpp"
#include "modelforge/eqc/emit.hpp"
#include "modelforge/eqc/evaluate.hpp"
#include "modelforge/kg/vocab.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace modelforge::api {

namespace fs = std::filesystem;
using kg::Iri;
using kg::Literal;
using kg::Triple;
using nlohmann::json;
namespace rdf = kg::vocab::rdf;
namespace rdfs = kg::vocab::rdfs;
namespace owl = kg::vocab::owl;
namespace skos = kg::vocab::skos;
namespace sci = kg::vocab::sci;
namespace cem = kg::vocab::cem;

namespace cur {
const Iri Document{"cur", "Document"};
const Iri Mention{"cur", "Mention"};
const Iri document{"cur", "document"};
const Iri name{"cur", "name"};
const Iri surface{"cur", "surface"};
const Iri line{"cur", "line"};
const Iri source{"cur", "source"};
const Iri concept_iri{"cur", "concept"};
const Iri item{"cur", "item"};
}  // namespace cur

const Iri& domain_graph() {
  static const Iri g{"graph", "domain"};
  return g;
}
const Iri& code_graph() {
  static const Iri g{"graph", "code"};
  return g;
}
const Iri& text_graph() {
  static const Iri g{"graph", "text"};
  return g;
}

std::string_view job_status_name(JobStatus s) {
  switch (s) {
    case JobStatus::Queued: return "queued";
    case JobStatus::Running: return "running";
    case JobStatus::Succeeded: return "succeeded";
    case JobStatus::Failed: return "failed";
  }
  return "queued";
}

struct Workbench::Txn {
  std::map<Iri, std::vector<Triple>> add;
  std::map<Iri, std::vector<Triple>> remove;
  std::vector<CurationItem> items;

  bool touches_domain() const { return add.count(domain_graph()) || remove.count(domain_graph()); }
};

namespace {

const std::vector<std::pair<Iri, const char*>>& graph_files() {
  static const std::vector<std::pair<Iri, const char*>> files{
      {domain_graph(), "domain.graph"}, {code_graph(), "code.graph"}, {text_graph(), "text.graph"}};
  return files;
}

Literal str(std::string s) { return Literal::string(std::move(s)); }

json term_json(const kg::Term& t) {
  if (const auto* iri = std::get_if<Iri>(&t)) return iri->str();
  const auto& lit = std::get<Literal>(t);
  return json{{"v", lit.lexical}, {"t", kg::datatype_name(lit.datatype)}};
}

kg::Term term_from_json(const json& j) {
  if (j.is_string()) return Iri::parse(j.get<std::string>());
  auto t = j.at("t").get<std::string>();
  for (auto dt : {kg::Datatype::String, kg::Datatype::Integer, kg::Datatype::Float, kg::Datatype::Boolean}) {
    if (kg::datatype_name(dt) == t) return Literal(j.at("v").get<std::string>(), dt);
  }
  throw ApiError(ApiError::Code::StoreCorrupt, "unknown literal datatype " + t);
}

json triples_json(const std::map<Iri, std::vector<Triple>>& m) {
  json out = json::object();
  for (const auto& [g, ts] : m) {
    json arr = json::array();
    for (const auto& t : ts) arr.push_back({t.subject.str(), t.predicate.str(), term_json(t.object)});
    out[g.str()] = arr;
  }
  return out;
}

std::map<Iri, std::vector<Triple>> triples_from_json(const json& j) {
  std::map<Iri, std::vector<Triple>> out;
  for (const auto& [g, arr] : j.items()) {
    auto& v = out[Iri::parse(g)];
    for (const auto& t : arr) {
      v.push_back({Iri::parse(t.at(0).get<std::string>()), Iri::parse(t.at(1).get<std::string>()), term_from_json(t.at(2))});
    }
  }
  return out;
}

// Write to a sibling temp file and rename over the target.
void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ApiError(ApiError::Code::StoreCorrupt, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ApiError(ApiError::Code::StoreCorrupt, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ApiError(ApiError::Code::MalformedRequest, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SourceFile {
  fs::path path;
  std::string name;  // relative to the directory it was found in
};

std::vector<SourceFile> expand(const std::vector<fs::path>& paths, const std::string& ext) {
  std::vector<SourceFile> out;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ext) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      for (const auto& f : found) out.push_back({f, fs::relative(f, p).generic_string()});
    } else if (fs::is_regular_file(p, ec)) {
      out.push_back({p, p.filename().generic_string()});
    } else {
      throw ApiError(ApiError::Code::MalformedRequest, "no such file or directory: " + p.string());
    }
  }
  return out;
}

// Items sort by kind prefix, then number.
bool id_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    auto u = s.rfind('_');
    std::size_t n = 0;
    if (u != std::string::npos) {
      try {
        n = std::stoul(s.substr(u + 1));
      } catch (...) {
      }
    }
    return std::pair(s.substr(0, u), n);
  };
  return split(a) < split(b);
}

std::string camel(std::string_view name) {
  std::string out;
  bool up = true;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
      up = false;
    } else {
      up = true;
    }
  }
  return out.empty() ? "Concept" : out;
}

ApiError from_equation_error(const eqc::EquationError& e) {
  return ApiError(ApiError::Code::InvalidEdit, std::string(eqc::error_code_name(e.code())) + ": " + e.what(), e.position(),
                  std::string(eqc::error_code_name(e.code())));
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

}  // namespace

Workbench::Workbench(WorkbenchConfig config) : config_(std::move(config)) {
  open();
  worker_ = std::thread([this] { worker(); });
}

Workbench::~Workbench() {
  {
    std::lock_guard lock(jobs_mutex_);
    stopping_ = true;
  }
  jobs_cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

void Workbench::open() {
  std::unique_lock lock(mutex_);
  fs::create_directories(config_.store_dir);
  store_.add_prefix("cur", kg::vocab::ns::cur);
  bool fresh = !fs::exists(config_.store_dir / "domain.graph");
  for (const auto& [id, file] : graph_files()) {
    store_.create_graph(id);
    fs::path p = config_.store_dir / file;
    if (!fresh || (id == domain_graph() && !config_.ontology.empty())) {
      fs::path src = fresh ? config_.ontology : p;
      if (!fs::exists(src)) {
        if (fresh) throw ApiError(ApiError::Code::StoreCorrupt, "ontology not found: " + src.string());
        continue;
      }
      std::ifstream in(src, std::ios::binary);
      auto prefixes = store_.prefixes();
      try {
        auto loaded = kg::read_graph(in, prefixes, id);
        for (const auto& [pfx, ns] : prefixes.entries()) {
          if (!store_.prefixes().contains(pfx)) store_.add_prefix(pfx, ns);
        }
        std::vector<Triple> ts(loaded.graph.begin(), loaded.graph.end());
        store_.insert(id, ts);
      } catch (const kg::KgError& e) {
        throw ApiError(ApiError::Code::StoreCorrupt, src.string() + ": " + e.what());
      }
    }
  }
  fs::path items = config_.store_dir / "curation.json";
  if (fs::exists(items)) {
    try {
      auto j = json::parse(slurp(items));
      const json counters = j.value("counters", json::object());
      for (const auto& [k, v] : counters.items()) counters_[k] = v.get<std::size_t>();
      for (const auto& x : j.value("items", json::array())) {
        auto it = item_from_json(x);
        items_[it.id] = std::move(it);
      }
    } catch (const json::exception& e) {
      throw ApiError(ApiError::Code::StoreCorrupt, "curation.json: " + std::string(e.what()));
    }
  }
  if (!config_.vocabulary.empty() && fs::exists(config_.vocabulary)) index_ = textex::AlignmentIndex::load(config_.vocabulary);

  // Replay a committed but unapplied transaction. A record that does not
  // parse was never committed: its rename never happened.
  fs::path wal = config_.store_dir / "wal.json";
  if (fs::exists(wal)) {
    Txn txn;
    try {
      auto j = json::parse(slurp(wal));
      txn.add = triples_from_json(j.at("add"));
      txn.remove = triples_from_json(j.at("remove"));
      for (const auto& x : j.at("items")) txn.items.push_back(item_from_json(x));
      for (const auto& [k, v] : j.at("counters").items()) counters_[k] = std::max(counters_[k], v.get<std::size_t>());
      apply_locked(txn);
      persist_locked();
    } catch (const json::exception&) {
    }
    fs::remove(wal);
  } else if (fresh) {
    persist_locked();
  }
  fs::remove(config_.store_dir / "wal.json.tmp");
  rebuild_dictionary_locked();
}

void Workbench::commit(Txn& txn) {
  json j{{"add", triples_json(txn.add)}, {"remove", triples_json(txn.remove)}, {"items", json::array()}};
  for (const auto& it : txn.items) j["items"].push_back(to_json(it));
  j["counters"] = counters_;
  fs::path wal = config_.store_dir / "wal.json";
  write_atomically(wal, j.dump());
  if (config_.crash_after_wal) throw std::runtime_error("simulated crash after write-ahead record");
  apply_locked(txn);
  persist_locked();
  fs::remove(wal);
  if (txn.touches_domain()) rebuild_dictionary_locked();
}

void Workbench::apply_locked(const Txn& txn) {
  for (const auto& [g, ts] : txn.remove) store_.remove(g, ts);
  for (const auto& [g, ts] : txn.add) store_.insert(g, ts);
  for (const auto& it : txn.items) items_[it.id] = it;
}

void Workbench::persist_locked() const {
  auto prefixes = store_.prefixes();
  for (const auto& [id, file] : graph_files()) {
    std::ostringstream out;
    kg::write_graph(out, id, store_.snapshot(id), prefixes);
    write_atomically(config_.store_dir / file, out.str());
  }
  std::vector<const CurationItem*> sorted;
  for (const auto& [id, it] : items_) sorted.push_back(&it);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return id_less(a->id, b->id); });
  json j{{"counters", counters_}, {"items", json::array()}};
  for (const auto* it : sorted) j["items"].push_back(to_json(*it));
  write_atomically(config_.store_dir / "curation.json", j.dump(2) + "\n");
}

void Workbench::rebuild_dictionary_locked() { dict_ = textex::build_dictionary(store_.snapshot(domain_graph())); }

std::string Workbench::next_id_locked(ItemKind kind) {
  std::string prefix(id_prefix(kind));
  return prefix + "_" + std::to_string(++counters_[prefix]);
}

CurationItem& Workbench::item_locked(const std::string& id) {
  auto it = items_.find(id);
  if (it == items_.end()) throw ApiError(ApiError::Code::UnknownItem, "no curation item " + id);
  return it->second;
}

// ---- ingestion -------------------------------------------------------------

IngestReport Workbench::ingest_text(const std::vector<fs::path>& paths) {
  IngestReport report;
  for (const auto& file : expand(paths, ".txt")) {
    auto doc = textex::DocumentText::from_text(fs::path(file.name).filename().string(), slurp(file.path));
    report.documents.push_back(doc.id);

    std::unique_lock lock(mutex_);
    Txn txn;
    const Iri D = kg::skolem("mf", "doc", {doc.id});
    auto text = store_.snapshot(text_graph());
    auto& drop = txn.remove[text_graph()];
    for (const auto& t : text.find(D, std::nullopt, std::nullopt)) drop.push_back(t);
    for (const auto& m : text.subjects(cur::document, D)) {
      for (const auto& t : text.find(m, std::nullopt, std::nullopt)) drop.push_back(t);
    }
    auto& prov = txn.add[text_graph()];
    prov.push_back({D, rdf::type, cur::Document});
    prov.push_back({D, cur::name, str(doc.id)});

    auto spans = textex::detect_equations(doc);
    auto mentions = textex::extract_concepts(doc, dict_);
    auto add_mention = [&](const textex::ConceptMention& m) {
      Iri M = kg::skolem("mf", "mention", {doc.id, std::to_string(m.line), std::to_string(m.start)});
      prov.push_back({M, rdf::type, cur::Mention});
      prov.push_back({M, cur::document, D});
      prov.push_back({M, cur::surface, str(m.surface)});
      prov.push_back({M, cur::line, Literal::integer(m.line)});
      prov.push_back({M, cur::source, str(m.source == textex::MentionSource::Knowledge ? "knowledge" : "pattern")});
      if (m.iri) prov.push_back({M, cur::concept_iri, *m.iri});
    };
    for (const auto& m : mentions) add_mention(m);

    // Unresolved phrases: confident alignments become concepts, the rest
    // wait for a curator.
    std::set<std::string> seen;
    for (const auto& [id, it] : items_) {
      if (const auto* a = std::get_if<AlignmentPayload>(&it.payload)) seen.insert(textex::phrase_key(a->mention));
    }
    for (const auto& m : textex::extract_pattern_concepts(doc, spans)) {
      if (dict_.lookup(m.surface)) continue;
      add_mention(m);
      std::string key = textex::phrase_key(m.surface);
      if (!seen.insert(key).second) continue;
      std::vector<textex::AlignmentCandidate> cands;
      if (index_.loaded()) cands = index_.candidates(m.surface);
      if (!cands.empty() && cands.front().dice_score >= textex::kAlignThreshold) {
        Iri c = mint_concept_locked(m.surface, txn);
        add_concept_triples(c, ConceptPayload{key, {}, {}}, txn);
        txn.add[domain_graph()].push_back({c, skos::exactMatch, cands.front().external});
        report.auto_aligned.push_back(c);
        continue;
      }
      if (cands.size() > 5) cands.resize(5);
      CurationItem item{next_id_locked(ItemKind::Alignment), ItemKind::Alignment, ItemStatus::Pending,
                        doc.id + ":" + std::to_string(m.line), {},
                        AlignmentPayload{m.surface, doc.id, m.line, std::move(cands), std::nullopt}};
      report.created.push_back(item.id);
      txn.items.push_back(std::move(item));
    }

    for (const auto& span : spans) {
      EquationPayload p{span.raw, doc.id, span.first_line, std::nullopt, {}};
      try {
        eqc::EquationSource src{doc.id, span.first_line};
        auto eq = eqc::parse_equation(span.raw, &src);
        for (const auto& b : augtype::extract_augmented_types(span, eq, doc, mentions, dict_)) {
          p.bindings[b.variable] = ProposedType{b.type, false, b.rule, b.evidence_line};
        }
      } catch (const eqc::EquationError&) {
        // Kept as an item: the curator can fix the text.
      }
      auto existing = std::find_if(items_.begin(), items_.end(), [&](const auto& kv) {
        const auto* e = std::get_if<EquationPayload>(&kv.second.payload);
        return e && !e->function && e->doc_id == doc.id && e->line == span.first_line && e->raw == span.raw;
      });
      if (existing != items_.end()) {
        CurationItem item = existing->second;
        if (item.status != ItemStatus::Pending) continue;
        auto& e = std::get<EquationPayload>(item.payload);
        auto merged = p.bindings;
        for (const auto& [v, t] : e.bindings) {
          if (t.curated) merged[v] = t;
        }
        if (merged != e.bindings) {
          e.bindings = std::move(merged);
          report.refreshed.push_back(item.id);
          txn.items.push_back(std::move(item));
        }
        continue;
      }
      CurationItem item{next_id_locked(ItemKind::Equation), ItemKind::Equation, ItemStatus::Pending,
                        doc.id + ":" + std::to_string(span.first_line), {}, std::move(p)};
      report.created.push_back(item.id);
      txn.items.push_back(std::move(item));
    }
    commit(txn);
  }
  return report;
}

IngestReport Workbench::ingest_code(const std::vector<fs::path>& paths, const std::vector<std::string>& ignore_classes) {
  IngestReport report;
  std::vector<codex::CompilationUnit> units;
  for (const auto& file : expand(paths, ".java")) {
    try {
      units.push_back(codex::parse_source({file.name, slurp(file.path)}));
      report.documents.push_back(file.name);
    } catch (const std::exception& e) {
      report.skipped.push_back(file.name + ": " + e.what());
    }
  }
  auto ignore = codex::IgnoreList::parse(join(ignore_classes, "\n"));
  auto triples = codex::lower_to_cem(units, ignore);
  kg::Graph code;
  for (const auto& t : triples) code.insert(t);

  std::unique_lock lock(mutex_);
  Txn txn;
  txn.add[code_graph()] = triples;
  for (const auto& m : codex::select_computational_methods(code)) {
    codex::Translation tr;
    try {
      tr = codex::translate_method(code, m, codex::infer_io(code, m));
    } catch (const codex::CodexError& e) {
      report.skipped.push_back(m.str() + ": " + e.what());
      continue;
    }
    const auto& fn = tr.function;
    int line = 0;
    if (auto b = code.object(m, cem::beginsAt); b && !kg::is_iri(*b)) line = static_cast<int>(std::get<Literal>(*b).as_int());
    std::string comment;
    for (const auto& c : code.subjects(cem::commentOf, m)) {
      if (auto t = code.object(c, cem::text); t && !kg::is_iri(*t)) comment += std::get<Literal>(*t).lexical + "\n";
    }
    auto bindings = augtype::bindings_from_comment(fn, comment, dict_);

    EquationPayload p{fn.output + " = " + eqc::to_infix(fn.body), "", line,
                      CodeFunction{fn.name, fn.inputs, fn.output, eqc::to_sexpr(fn.body)}, {}};
    for (const auto& b : bindings) p.bindings[b.variable] = ProposedType{b.type, false, b.rule, b.evidence_line};
    auto existing = std::find_if(items_.begin(), items_.end(), [&](const auto& kv) {
      return kv.second.kind == ItemKind::Equation && kv.second.created_from == m.str();
    });
    if (existing == items_.end()) {
      CurationItem item{next_id_locked(ItemKind::Equation), ItemKind::Equation, ItemStatus::Pending, m.str(), {}, p};
      report.created.push_back(item.id);
      txn.items.push_back(std::move(item));
    }

    // Parameters named in the method's comment get a typing proposal.
    for (const auto& b : bindings) {
      for (const auto& a : code.objects(m, cem::arguments)) {
        const Iri& P = std::get<Iri>(a);
        auto n = code.object(P, cem::name);
        if (!n || kg::is_iri(*n) || std::get<Literal>(*n).lexical != b.variable) continue;
        bool dup = std::any_of(items_.begin(), items_.end(), [&](const auto& kv) {
          const auto* t = std::get_if<AugTypePayload>(&kv.second.payload);
          return t && t->code_variable == P && t->proposed.concept_iri == b.type.concept_iri;
        });
        if (dup) continue;
        CurationItem item{next_id_locked(ItemKind::AugType), ItemKind::AugType, ItemStatus::Pending, m.str(), {},
                          AugTypePayload{P, b.variable, m, b.type}};
        report.created.push_back(item.id);
        txn.items.push_back(std::move(item));
      }
    }
  }
  commit(txn);
  return report;
}

std::string Workbench::submit_text(std::vector<fs::path> paths) {
  std::lock_guard lock(jobs_mutex_);
  std::string id = "J_" + std::to_string(++job_counter_);
  jobs_[id] = Job{id, "text", JobStatus::Queued, {}, {}};
  queue_.emplace_back(id, [this, paths = std::move(paths)] { return ingest_text(paths); });
  jobs_cv_.notify_all();
  return id;
}

std::string Workbench::submit_code(std::vector<fs::path> paths, std::vector<std::string> ignore_classes) {
  std::lock_guard lock(jobs_mutex_);
  std::string id = "J_" + std::to_string(++job_counter_);
  jobs_[id] = Job{id, "code", JobStatus::Queued, {}, {}};
  queue_.emplace_back(id, [this, paths = std::move(paths), ignore = std::move(ignore_classes)] {
    return ingest_code(paths, ignore);
  });
  jobs_cv_.notify_all();
  return id;
}

Job Workbench::job(const std::string& id) const {
  std::lock_guard lock(jobs_mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw ApiError(ApiError::Code::UnknownItem, "no job " + id);
  return it->second;
}

void Workbench::wait_idle() {
  std::unique_lock lock(jobs_mutex_);
  jobs_cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

void Workbench::worker() {
  for (;;) {
    std::pair<std::string, std::function<IngestReport()>> task;
    {
      std::unique_lock lock(jobs_mutex_);
      jobs_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      task = std::move(queue_.front());
      queue_.pop_front();
      busy_ = true;
      jobs_[task.first].status = JobStatus::Running;
    }
    Job done;
    try {
      done.report = task.second();
      done.status = JobStatus::Succeeded;
    } catch (const std::exception& e) {
      done.status = JobStatus::Failed;
      done.error = e.what();
    }
    {
      std::lock_guard lock(jobs_mutex_);
      auto& j = jobs_[task.first];
      j.status = done.status;
      j.error = done.error;
      j.report = std::move(done.report);
      busy_ = false;
    }
    jobs_cv_.notify_all();
  }
}

// ---- curation --------------------------------------------------------------

std::vector<CurationItem> Workbench::items(std::optional<ItemKind> kind, std::optional<ItemStatus> status) const {
  std::shared_lock lock(mutex_);
  std::vector<CurationItem> out;
  for (const auto& [id, it] : items_) {
    if ((!kind || it.kind == *kind) && (!status || it.status == *status)) out.push_back(it);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return id_less(a.id, b.id); });
  return out;
}

CurationItem Workbench::item(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = items_.find(id);
  if (it == items_.end()) throw ApiError(ApiError::Code::UnknownItem, "no curation item " + id);
  return it->second;
}

bool Workbench::has_item(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return items_.count(id) > 0;
}

Iri Workbench::mint_concept_locked(const std::string& name, Txn& txn) const {
  std::string base = camel(name);
  auto domain = store_.snapshot(domain_graph());
  auto taken = [&](const Iri& c) {
    if (!domain.find(c, std::nullopt, std::nullopt).empty()) return true;
    const auto it = txn.add.find(domain_graph());
    return it != txn.add.end() && std::any_of(it->second.begin(), it->second.end(), [&](const Triple& t) { return t.subject == c; });
  };
  Iri c{"dom", base};
  for (int n = 2; taken(c); ++n) c = Iri{"dom", base + "_" + std::to_string(n)};
  return c;
}

void Workbench::add_concept_triples(const Iri& iri, const ConceptPayload& c, Txn& txn) const {
  auto& add = txn.add[domain_graph()];
  add.push_back({iri, rdf::type, owl::Class});
  add.push_back({iri, rdfs::subClassOf, sci::UnittedQuantity});
  add.push_back({iri, skos::prefLabel, str(c.name)});
  for (const auto& a : c.aliases) add.push_back({iri, skos::altLabel, str(a)});
  for (const auto& u : c.units) add.push_back({iri, sci::unit, str(u)});
}

void Workbench::write_equation(const CurationItem& item, Txn& txn) const {
  const auto& p = std::get<EquationPayload>(item.payload);
  auto& add = txn.add[domain_graph()];
  const Iri E{"mf", item.id};
  add.push_back({E, rdf::type, sci::Equation});
  add.push_back({E, sci::expression, str(p.raw)});
  add.push_back({E, cur::item, str(item.id)});
  add.push_back({E, cur::source, str(item.created_from)});
  auto describe = [&](const Iri& D, const std::string& var, std::optional<int> index) {
    const auto& t = p.bindings.at(var).type;
    add.push_back({D, rdf::type, sci::DataDescriptor});
    add.push_back({D, sci::name, str(var)});
    add.push_back({D, sci::datatype, str("float")});
    add.push_back({D, sci::augmentedType, t.concept_iri});
    if (index) add.push_back({D, sci::argumentIndex, Literal::integer(*index)});
    for (const auto& u : t.units) add.push_back({D, sci::unit, str(u)});
  };
  auto fns = interpretations(p);
  for (std::size_t k = 0; k < fns.size(); ++k) {
    const auto& fn = fns[k];
    const std::string base = item.id + "_f" + std::to_string(k);
    const Iri F{"mf", base};
    add.push_back({F, rdf::type, sci::Equation});
    add.push_back({F, sci::derivedFrom, E});
    add.push_back({F, sci::functionName, str(fn.name)});
    add.push_back({F, sci::functionText, str(eqc::emit_function_text(fn))});
    add.push_back({F, sci::functionIR, str(eqc::to_sexpr(fn.body))});
    for (std::size_t i = 0; i < fn.inputs.size(); ++i) {
      Iri D{"mf", base + "_arg" + std::to_string(i)};
      add.push_back({F, sci::arguments, D});
      describe(D, fn.inputs[i], static_cast<int>(i));
    }
    Iri R{"mf", base + "_ret"};
    add.push_back({F, sci::returnTypes, R});
    describe(R, fn.output, std::nullopt);
  }
}

CurationItem Workbench::commit_item_locked(CurationItem item, ItemStatus status) {
  Txn txn;
  switch (item.kind) {
    case ItemKind::Equation: {
      auto& p = std::get<EquationPayload>(item.payload);
      try {
        interpretations(p);
      } catch (const eqc::EquationError& e) {
        throw from_equation_error(e);
      }
      auto missing = missing_variables(p);
      if (!missing.empty())
        throw ApiError(ApiError::Code::Incomplete, item.id + " has variables without a type: " + join(missing));
      write_equation(item, txn);
      break;
    }
    case ItemKind::Alignment: {
      auto& a = std::get<AlignmentPayload>(item.payload);
      if (!a.chosen && !a.candidates.empty()) a.chosen = a.candidates.front().external;
      auto c = dict_.lookup(a.mention);
      if (!c) {
        c = mint_concept_locked(a.mention, txn);
        add_concept_triples(*c, ConceptPayload{textex::phrase_key(a.mention), {}, {}}, txn);
      }
      if (a.chosen) txn.add[domain_graph()].push_back({*c, skos::exactMatch, *a.chosen});
      break;
    }
    case ItemKind::AugType: {
      const auto& t = std::get<AugTypePayload>(item.payload);
      txn.add[domain_graph()].push_back({t.code_variable, sci::augmentedType, t.proposed.concept_iri});
      break;
    }
    case ItemKind::Concept: {
      const auto& c = std::get<ConceptPayload>(item.payload);
      if (dict_.lookup(c.name)) throw ApiError(ApiError::Code::DuplicateConcept, "concept '" + c.name + "' already exists");
      add_concept_triples(mint_concept_locked(c.name, txn), c, txn);
      break;
    }
  }
  item.status = status;
  txn.items.push_back(item);
  commit(txn);
  return item;
}

CurationItem Workbench::accept(const std::string& id) {
  std::unique_lock lock(mutex_);
  CurationItem item = item_locked(id);
  if (item.status != ItemStatus::Pending)
    throw ApiError(ApiError::Code::AlreadyResolved, id + " is already " + std::string(status_name(item.status)));
  return commit_item_locked(std::move(item), ItemStatus::Accepted);
}

CurationItem Workbench::reject(const std::string& id, const std::string& reason) {
  std::unique_lock lock(mutex_);
  CurationItem item = item_locked(id);
  if (item.status != ItemStatus::Pending)
    throw ApiError(ApiError::Code::AlreadyResolved, id + " is already " + std::string(status_name(item.status)));
  item.status = ItemStatus::Rejected;
  item.reason = reason;
  Txn txn;
  txn.items.push_back(item);
  commit(txn);
  return item;
}

CurationItem Workbench::edit(const std::string& id, const json& payload) {
  std::unique_lock lock(mutex_);
  CurationItem item = item_locked(id);
  if (item.status != ItemStatus::Pending)
    throw ApiError(ApiError::Code::AlreadyResolved, id + " is already " + std::string(status_name(item.status)));
  if (!payload.is_object()) throw ApiError(ApiError::Code::MalformedRequest, "edit payload must be an object");

  try {
    switch (item.kind) {
      case ItemKind::Equation: {
        auto& p = std::get<EquationPayload>(item.payload);
        if (payload.contains("raw")) {
          std::string raw = payload["raw"].get<std::string>();
          try {
            eqc::parse_equation(raw);
          } catch (const eqc::EquationError& e) {
            throw from_equation_error(e);
          }
          if (raw != p.raw) p.function.reset();
          p.raw = raw;
        }
        std::vector<std::string> vars;
        try {
          vars = variables(p);
        } catch (const eqc::EquationError& e) {
          throw from_equation_error(e);
        }
        const json bindings = payload.value("bindings", json::object());
        for (const auto& [v, b] : bindings.items()) {
          if (std::find(vars.begin(), vars.end(), v) == vars.end())
            throw ApiError(ApiError::Code::InvalidEdit, "no variable " + v + " in " + id);
          std::string name = b.is_string() ? b.get<std::string>() : b.at("concept").get<std::string>();
          auto c = resolve_concept_locked(name);
          if (!c) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + name + "'");
          const auto* entry = dict_.entry(*c);
          augtype::AugmentedType t{*c, entry ? entry->preferred_name : c->local, entry ? entry->units : std::vector<std::string>{}};
          if (b.is_object() && b.contains("units")) t.units = b["units"].get<std::vector<std::string>>();
          p.bindings[v] = ProposedType{t, true, {}, 0};
        }
        std::erase_if(p.bindings, [&](const auto& kv) { return std::find(vars.begin(), vars.end(), kv.first) == vars.end(); });
        if (!missing_variables(p).empty()) {
          Txn txn;
          txn.items.push_back(item);
          commit(txn);
          return item;
        }
        break;
      }
      case ItemKind::Alignment: {
        auto& a = std::get<AlignmentPayload>(item.payload);
        if (payload.contains("chosen")) a.chosen = Iri::parse(payload["chosen"].get<std::string>());
        if (payload.contains("mention")) a.mention = payload["mention"].get<std::string>();
        break;
      }
      case ItemKind::AugType: {
        auto& t = std::get<AugTypePayload>(item.payload);
        if (payload.contains("concept")) {
          std::string name = payload["concept"].get<std::string>();
          auto c = resolve_concept_locked(name);
          if (!c) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + name + "'");
          const auto* entry = dict_.entry(*c);
          t.proposed = {*c, entry ? entry->preferred_name : c->local, entry ? entry->units : std::vector<std::string>{}};
        }
        break;
      }
      case ItemKind::Concept: {
        auto& c = std::get<ConceptPayload>(item.payload);
        if (payload.contains("name")) c.name = payload["name"].get<std::string>();
        if (payload.contains("aliases")) c.aliases = payload["aliases"].get<std::vector<std::string>>();
        if (payload.contains("units")) c.units = payload["units"].get<std::vector<std::string>>();
        break;
      }
    }
  } catch (const json::exception& e) {
    throw ApiError(ApiError::Code::MalformedRequest, std::string("bad edit payload: ") + e.what());
  } catch (const kg::KgError& e) {
    throw ApiError(ApiError::Code::MalformedRequest, std::string("bad edit payload: ") + e.what());
  }
  return commit_item_locked(std::move(item), ItemStatus::Edited);
}

CurationItem Workbench::set_binding(const std::string& id, const std::string& variable, const Iri& concept_iri,
                                    const std::optional<std::string>& unit, bool output) {
  std::unique_lock lock(mutex_);
  CurationItem item = item_locked(id);
  if (item.status != ItemStatus::Pending)
    throw ApiError(ApiError::Code::AlreadyResolved, id + " is already " + std::string(status_name(item.status)));
  auto* p = std::get_if<EquationPayload>(&item.payload);
  if (!p) throw ApiError(ApiError::Code::InvalidEdit, id + " is not an equation");
  std::vector<std::string> vars;
  try {
    vars = variables(*p);
  } catch (const eqc::EquationError& e) {
    throw from_equation_error(e);
  }
  if (std::find(vars.begin(), vars.end(), variable) == vars.end())
    throw ApiError(ApiError::Code::InvalidEdit, "no variable " + variable + " in " + id);
  if (p->function && output != (variable == p->function->output))
    throw ApiError(ApiError::Code::InvalidEdit,
                   variable + (output ? " is not the output of " : " is the output of ") + id);
  const auto* entry = dict_.entry(concept_iri);
  if (!entry) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept " + concept_iri.str());
  augtype::AugmentedType t{concept_iri, entry->preferred_name, entry->units};
  if (unit) t.units = {*unit};
  p->bindings[variable] = ProposedType{t, true, {}, 0};
  Txn txn;
  txn.items.push_back(item);
  commit(txn);
  return item;
}

CurationItem Workbench::align(const std::string& mention, const Iri& external) {
  std::unique_lock lock(mutex_);
  std::string key = textex::phrase_key(mention);
  for (const auto& [id, it] : items_) {
    const auto* a = std::get_if<AlignmentPayload>(&it.payload);
    if (a && it.status == ItemStatus::Pending && textex::phrase_key(a->mention) == key) {
      CurationItem item = it;
      std::get<AlignmentPayload>(item.payload).chosen = external;
      return commit_item_locked(std::move(item), ItemStatus::Accepted);
    }
  }
  if (!resolve_concept_locked(mention)) throw ApiError(ApiError::Code::UnknownConcept, "unknown concept '" + mention + "'");
  CurationItem item{next_id_locked(ItemKind::Alignment), ItemKind::Alignment, ItemStatus::Pending, "curator", {},
                    AlignmentPayload{mention, "", 0, {}, external}};
  return commit_item_locked(std::move(item), ItemStatus::Accepted);
}

CurationItem Workbench::add_concept(const std::string& name, const std::vector<std::string>& aliases) {
  std::unique_lock lock(mutex_);
  if (name.empty()) throw ApiError(ApiError::Code::MalformedRequest, "concept name is empty");
  if (dict_.lookup(name)) throw ApiError(ApiError::Code::DuplicateConcept, "concept '" + name + "' already exists");
  CurationItem item{next_id_locked(ItemKind::Concept), ItemKind::Concept, ItemStatus::Pending, "curator", {},
                    ConceptPayload{name, aliases, {}}};
  Txn txn;
  txn.items.push_back(item);
  commit(txn);
  return item;
}

// ---- models ----------------------------------------------------------------

EquationRecord Workbench::record_locked(const CurationItem& item) const {
  const auto& p = std::get<EquationPayload>(item.payload);
  EquationRecord r{item.id, p.raw, item.status, item.created_from, p.bindings, {}, {}, {}};
  try {
    for (const auto& fn : interpretations(p)) {
      r.interpretations.push_back({fn.name, fn.inputs, fn.output, eqc::emit_function_text(fn)});
    }
    r.missing = missing_variables(p);
  } catch (const eqc::EquationError& e) {
    r.parse_error = std::string(eqc::error_code_name(e.code())) + ": " + e.what();
  }
  return r;
}

std::vector<EquationRecord> Workbench::equations(bool committed) const {
  std::shared_lock lock(mutex_);
  std::vector<EquationRecord> out;
  for (const auto& [id, it] : items_) {
    if (it.kind == ItemKind::Equation &&
        (!committed || it.status == ItemStatus::Accepted || it.status == ItemStatus::Edited))
      out.push_back(record_locked(it));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return id_less(a.id, b.id); });
  return out;
}

EquationRecord Workbench::equation(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = items_.find(id);
  if (it == items_.end() || it->second.kind != ItemKind::Equation)
    throw ApiError(ApiError::Code::UnknownItem, "no equation " + id);
  return record_locked(it->second);
}

EvalResult Workbench::evaluate(const std::string& id, const eqc::Bindings& bindings) const {
  std::vector<eqc::FunctionDef> fns;
  {
    std::shared_lock lock(mutex_);
    auto it = items_.find(id);
    if (it == items_.end() || it->second.kind != ItemKind::Equation)
      throw ApiError(ApiError::Code::UnknownItem, "no equation " + id);
    try {
      fns = interpretations(std::get<EquationPayload>(it->second.payload));
    } catch (const eqc::EquationError& e) {
      throw from_equation_error(e);
    }
  }
  const eqc::FunctionDef* pick = nullptr;
  for (const auto& fn : fns) {
    bool ready = std::all_of(fn.inputs.begin(), fn.inputs.end(), [&](const auto& v) { return bindings.count(v) > 0; });
    if (ready && !bindings.count(fn.output)) {
      pick = &fn;
      break;
    }
  }
  if (!pick) {
    for (const auto& fn : fns) {
      if (bindings.count(fn.output)) continue;
      for (const auto& v : fn.inputs) {
        if (!bindings.count(v)) throw ApiError(ApiError::Code::MissingBinding, "no value for " + v);
      }
    }
    if (fns.empty()) throw ApiError(ApiError::Code::InvalidEdit, id + " has no executable form");
    pick = &fns.front();
  }
  try {
    return {pick->name, pick->output, eqc::evaluate(*pick, bindings)};
  } catch (const eqc::EvalError& e) {
    auto code = e.code() == eqc::EvalError::Code::DomainError ? ApiError::Code::DomainError : ApiError::Code::MissingBinding;
    throw ApiError(code, e.what());
  }
}

std::vector<compose::ModelCard> Workbench::model_cards() const {
  std::shared_lock lock(mutex_);
  auto g = store_.snapshot(domain_graph());
  auto text = [&](const Iri& s, const Iri& p) {
    auto o = g.object(s, p);
    return o && !kg::is_iri(*o) ? std::get<Literal>(*o).lexical : std::string{};
  };
  auto descriptor = [&](const Iri& D) {
    augtype::DataDescriptor d{text(D, sci::name), augtype::DataType::Float, std::nullopt};
    if (auto c = g.object(D, sci::augmentedType); c && kg::is_iri(*c)) {
      const Iri& ci = std::get<Iri>(*c);
      const auto* entry = dict_.entry(ci);
      augtype::AugmentedType t{ci, entry ? entry->preferred_name : ci.local, {}};
      for (const auto& u : g.objects(D, sci::unit)) t.units.push_back(std::get<Literal>(u).lexical);
      d.augmented_type = t;
    }
    return d;
  };
  std::vector<compose::ModelCard> cards;
  for (const auto& t : g.find(std::nullopt, sci::functionIR, std::nullopt)) {
    const Iri& F = t.subject;
    compose::ModelCard card;
    card.model = F;
    card.fn.name = text(F, sci::functionName);
    card.fn.body = eqc::from_sexpr(std::get<Literal>(t.object).lexical);
    std::vector<std::pair<std::int64_t, Iri>> args;
    for (const auto& a : g.objects(F, sci::arguments)) {
      const Iri& D = std::get<Iri>(a);
      auto idx = g.object(D, sci::argumentIndex);
      args.emplace_back(idx ? std::get<Literal>(*idx).as_int() : 0, D);
    }
    std::sort(args.begin(), args.end());
    for (const auto& [i, D] : args) {
      card.inputs.push_back(descriptor(D));
      card.fn.inputs.push_back(card.inputs.back().name);
    }
    if (auto r = g.object(F, sci::returnTypes); r && kg::is_iri(*r)) card.output = descriptor(std::get<Iri>(*r));
    card.fn.output = card.output.name;
    cards.push_back(std::move(card));
  }
  return cards;
}

ComputeResult Workbench::compute(const Iri& target, const compose::Quantities& given) const {
  auto cards = model_cards();
  std::set<Iri> known;
  for (const auto& [k, v] : given) known.insert(k);
  try {
    auto plan = compose::plan(target, known, cards);
    auto values = compose::execute(plan, given);
    return {plan, values, values.at(target)};
  } catch (const compose::ComposeError& e) {
    using C = compose::ComposeError::Code;
    auto code = e.code() == C::DomainError       ? ApiError::Code::DomainError
                : e.code() == C::MissingBinding ? ApiError::Code::MissingBinding
                                                : ApiError::Code::NoPlan;
    throw ApiError(code, e.what());
  }
}

// ---- knowledge -------------------------------------------------------------

kg::QueryResult Workbench::query(const kg::PatternQuery& q, const std::vector<Iri>& graphs) const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> gs = graphs;
  if (gs.empty()) {
    for (const auto& [id, file] : graph_files()) gs.push_back(id);
  }
  auto prefixes = store_.prefixes();
  auto check = [&](const auto& term) {
    if (const auto* iri = std::get_if<Iri>(&term); iri && !prefixes.contains(iri->prefix))
      throw ApiError(ApiError::Code::MalformedQuery, "unknown prefix '" + iri->prefix + "'");
  };
  for (const auto& p : q.patterns) {
    check(p.subject);
    check(p.predicate);
    check(p.object);
  }
  for (const auto& f : q.filters) {
    if (const auto* t = std::get_if<kg::Term>(&f.operand)) check(*t);
  }
  try {
    q.validate();
    return store_.query(q, gs);
  } catch (const kg::KgError& e) {
    throw ApiError(ApiError::Code::MalformedQuery, e.what());
  }
}

kg::Graph Workbench::graph(const Iri& id) const {
  std::shared_lock lock(mutex_);
  if (!store_.has_graph(id)) throw ApiError(ApiError::Code::UnknownItem, "no graph " + id.str());
  return store_.snapshot(id);
}

textex::ConceptDictionary Workbench::dictionary() const {
  std::shared_lock lock(mutex_);
  return dict_;
}

std::optional<Iri> Workbench::resolve_concept_locked(std::string_view name) const {
  if (name.empty()) return std::nullopt;
  if (name.find(':') != std::string_view::npos) {
    try {
      Iri iri = Iri::parse(name);
      if (dict_.entry(iri)) return iri;
    } catch (const kg::KgError&) {
    }
    return std::nullopt;
  }
  for (const auto& e : dict_.entries()) {
    if (e.canonical.local == name) return e.canonical;
  }
  if (auto c = dict_.lookup(name)) return c;
  return dict_.lookup(concept_label(name));
}

std::optional<Iri> Workbench::resolve_concept(std::string_view name) const {
  std::shared_lock lock(mutex_);
  return resolve_concept_locked(name);
}

std::optional<Iri> Workbench::resolve_variable(std::string_view symbol) const {
  std::set<Iri> seen;
  for (const auto& card : model_cards()) {
    for (const auto& d : card.inputs) {
      if (d.name == symbol && d.augmented_type) seen.insert(d.augmented_type->concept_iri);
    }
    if (card.output.name == symbol && card.output.augmented_type) seen.insert(card.output.augmented_type->concept_iri);
  }
  if (seen.size() == 1) return *seen.begin();
  return std::nullopt;
}

// ---- records ---------------------------------------------------------------

json to_json(const IngestReport& r) {
  json aligned = json::array();
  for (const auto& c : r.auto_aligned) aligned.push_back(c.str());
  return {{"documents", r.documents}, {"created", r.created}, {"refreshed", r.refreshed},
          {"autoAligned", aligned},    {"skipped", r.skipped}};
}

json to_json(const Job& j) {
  json out{{"id", j.id}, {"kind", j.kind}, {"status", job_status_name(j.status)}};
  if (!j.error.empty()) out["error"] = j.error;
  if (j.status == JobStatus::Succeeded) out["report"] = to_json(j.report);
  return out;
}

json to_json(const EquationRecord& r) {
  json b = json::object();
  for (const auto& [v, t] : r.bindings) {
    json x = to_json(t.type);
    x["curated"] = t.curated;
    b[v] = x;
  }
  json fns = json::array();
  for (const auto& f : r.interpretations) {
    fns.push_back({{"name", f.name}, {"inputs", f.inputs}, {"output", f.output}, {"text", f.text}});
  }
  json out{{"id", r.id},          {"raw", r.raw},   {"status", status_name(r.status)}, {"createdFrom", r.created_from},
           {"bindings", b},       {"missing", r.missing}, {"interpretations", fns}};
  if (!r.parse_error.empty()) out["parseError"] = r.parse_error;
  return out;
}

}  // namespace modelforge::api
