#include "modelforge/kg/store.hpp"
#include "modelforge/textex/align.hpp"
#include "modelforge/textex/detect.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace modelforge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<textex::DocumentText> corpus() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(MODELFORGE_TEST_DATA) / "text" / "pages")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<textex::DocumentText> docs;
  for (const auto& f : files) docs.push_back(textex::DocumentText::from_text(f.filename().string(), slurp(f)));
  return docs;
}

textex::ConceptDictionary dictionary() {
  std::ifstream in(fs::path(MODELFORGE_DATA_DIR) / "ontology.graph");
  kg::PrefixTable prefixes;
  return textex::build_dictionary(kg::read_graph(in, prefixes).graph);
}

void Dice(benchmark::State& state) {
  std::string a(static_cast<std::size_t>(state.range(0)), 'x');
  std::string b = a;
  for (std::size_t i = 0; i < a.size(); i += 3) a[i] = static_cast<char>('a' + i % 26);
  for (auto _ : state) benchmark::DoNotOptimize(textex::dice(a, b));
}
BENCHMARK(Dice)->Arg(8)->Arg(32)->Arg(128);

void AlignCandidates(benchmark::State& state) {
  auto index = textex::AlignmentIndex::load(fs::path(MODELFORGE_DATA_DIR) / "vocab.tsv");
  for (auto _ : state) benchmark::DoNotOptimize(index.candidates("specific impulse"));
}
BENCHMARK(AlignCandidates);

void ExtractConcepts(benchmark::State& state) {
  auto docs = corpus();
  auto dict = dictionary();
  for (auto _ : state) {
    for (const auto& d : docs) benchmark::DoNotOptimize(textex::extract_concepts(d, dict));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(ExtractConcepts);

void DetectEquations(benchmark::State& state) {
  auto docs = corpus();
  for (auto _ : state) {
    for (const auto& d : docs) benchmark::DoNotOptimize(textex::detect_equations(d));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(DetectEquations);

}  // namespace
