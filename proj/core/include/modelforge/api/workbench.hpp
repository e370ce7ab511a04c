#pragma once

#include "modelforge/api/curation.hpp"
#include "modelforge/api/error.hpp"
#include "modelforge/compose/compose.hpp"
#include "modelforge/eqc/evaluate.hpp"
#include "modelforge/kg/store.hpp"

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <thread>

namespace modelforge::api {

inline constexpr const char* kVersion = "0.3.0";

struct WorkbenchConfig {
  std::filesystem::path store_dir;
  /// Seeds the domain graph of a new store.
  std::filesystem::path ontology;
  /// Vocabulary snapshot for alignment; alignment is skipped when empty.
  std::filesystem::path vocabulary;
  /// Test hook: throw right after the write-ahead record is durable, as if
  /// the process died before applying it.
  bool crash_after_wal = false;
};

/// Graph ids inside a store.
const kg::Iri& domain_graph();  // ontology, curated concepts, equations
const kg::Iri& code_graph();    // code meta-model triples
const kg::Iri& text_graph();    // documents and mentions

struct IngestReport {
  std::vector<std::string> documents;
  std::vector<std::string> created;      // new item ids
  std::vector<std::string> refreshed;    // pending items whose proposals were updated
  std::vector<kg::Iri> auto_aligned;     // concepts created by confident alignment
  std::vector<std::string> skipped;      // "<where>: <why>"
};

enum class JobStatus { Queued, Running, Succeeded, Failed };
std::string_view job_status_name(JobStatus s);

struct Job {
  std::string id;
  std::string kind;  // "text" or "code"
  JobStatus status = JobStatus::Queued;
  std::string error;
  IngestReport report;
};

struct Interpretation {
  std::string name;
  std::vector<std::string> inputs;
  std::string output;
  std::string text;  // emitted Python
};

struct EquationRecord {
  std::string id;
  std::string raw;
  ItemStatus status = ItemStatus::Pending;
  std::string created_from;
  std::map<std::string, ProposedType> bindings;
  std::vector<Interpretation> interpretations;
  std::vector<std::string> missing;
  std::string parse_error;
};

struct EvalResult {
  std::string function;
  std::string output;
  double value = 0.0;
};

struct ComputeResult {
  compose::WorkflowPlan plan;
  compose::Quantities values;
  double value = 0.0;
};

/// The curation workbench: a store directory holding the three graphs and
/// the curation items. Every mutation goes through one serialized writer
/// and one write-ahead record, so graph writes and status changes land
/// together or not at all. Reads take a shared lock.
class Workbench {
public:
  explicit Workbench(WorkbenchConfig config);
  ~Workbench();
  Workbench(const Workbench&) = delete;
  Workbench& operator=(const Workbench&) = delete;

  const WorkbenchConfig& config() const { return config_; }

  // Ingestion. Paths may be files or directories; directories are walked for
  // .txt (text) or .java (code) files in path order.
  IngestReport ingest_text(const std::vector<std::filesystem::path>& paths);
  IngestReport ingest_code(const std::vector<std::filesystem::path>& paths, const std::vector<std::string>& ignore_classes);
  std::string submit_text(std::vector<std::filesystem::path> paths);
  std::string submit_code(std::vector<std::filesystem::path> paths, std::vector<std::string> ignore_classes);
  Job job(const std::string& id) const;
  /// Blocks until every submitted job has finished.
  void wait_idle();

  // Curation.
  std::vector<CurationItem> items(std::optional<ItemKind> kind = {}, std::optional<ItemStatus> status = {}) const;
  CurationItem item(const std::string& id) const;
  bool has_item(const std::string& id) const;
  CurationItem accept(const std::string& id);
  CurationItem reject(const std::string& id, const std::string& reason);
  /// Replaces an equation's text and/or bindings. A complete result is
  /// committed (status edited); an incomplete one stays pending.
  CurationItem edit(const std::string& id, const nlohmann::json& payload);
  CurationItem set_binding(const std::string& id, const std::string& variable, const kg::Iri& concept_iri,
                           const std::optional<std::string>& unit, bool output);
  /// Commits the pending alignment for `mention` to `external`, or links an
  /// existing concept of that name when no alignment is pending.
  CurationItem align(const std::string& mention, const kg::Iri& external);
  CurationItem add_concept(const std::string& name, const std::vector<std::string>& aliases);

  // Models.
  /// Every equation item, pending ones included; `committed` keeps only
  /// accepted and edited ones.
  std::vector<EquationRecord> equations(bool committed = false) const;
  EquationRecord equation(const std::string& id) const;  // any equation item
  EvalResult evaluate(const std::string& id, const eqc::Bindings& bindings) const;
  std::vector<compose::ModelCard> model_cards() const;
  ComputeResult compute(const kg::Iri& target, const compose::Quantities& given) const;

  // Knowledge.
  kg::QueryResult query(const kg::PatternQuery& q, const std::vector<kg::Iri>& graphs = {}) const;
  kg::Graph graph(const kg::Iri& id) const;
  textex::ConceptDictionary dictionary() const;
  /// A concept by local name ("SpeedOfSound"), CURIE or any of its names.
  std::optional<kg::Iri> resolve_concept(std::string_view name) const;
  /// The concept a variable symbol denotes across committed models, when
  /// that is unambiguous.
  std::optional<kg::Iri> resolve_variable(std::string_view symbol) const;

private:
  struct Txn;

  void open();
  void commit(Txn& txn);
  void apply_locked(const Txn& txn);
  void persist_locked() const;
  void rebuild_dictionary_locked();
  std::string next_id_locked(ItemKind kind);
  CurationItem& item_locked(const std::string& id);
  CurationItem commit_item_locked(CurationItem item, ItemStatus status);
  std::optional<kg::Iri> resolve_concept_locked(std::string_view name) const;
  kg::Iri mint_concept_locked(const std::string& name, Txn& txn) const;
  void add_concept_triples(const kg::Iri& iri, const ConceptPayload& c, Txn& txn) const;
  void write_equation(const CurationItem& item, Txn& txn) const;
  EquationRecord record_locked(const CurationItem& item) const;
  void worker();

  WorkbenchConfig config_;
  mutable std::shared_mutex mutex_;
  kg::Store store_;
  std::map<std::string, CurationItem> items_;
  std::map<std::string, std::size_t> counters_;
  textex::ConceptDictionary dict_;
  textex::AlignmentIndex index_;

  mutable std::mutex jobs_mutex_;
  std::condition_variable jobs_cv_;
  std::map<std::string, Job> jobs_;
  std::deque<std::pair<std::string, std::function<IngestReport()>>> queue_;
  std::size_t job_counter_ = 0;
  bool stopping_ = false;
  bool busy_ = false;
  std::thread worker_;
};

nlohmann::json to_json(const IngestReport& r);
nlohmann::json to_json(const Job& j);
nlohmann::json to_json(const EquationRecord& r);

}  // namespace modelforge::api
