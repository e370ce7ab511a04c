#include "modelforge/kg/store.hpp"
#include "modelforge/kg/vocab.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace modelforge;
using kg::Iri;

namespace {

// A call graph of `n` methods with a few random calls each.
kg::Graph call_graph(std::int64_t n) {
  std::mt19937 rng(42);
  kg::Graph g;
  auto m = [](std::int64_t i) { return Iri{"mf", "m" + std::to_string(i)}; };
  for (std::int64_t i = 0; i < n; ++i) {
    g.insert({m(i), kg::vocab::rdf::type, kg::vocab::cem::Method});
    for (int k = 0; k < 3; ++k) g.insert({m(i), kg::vocab::cem::calls, m(static_cast<std::int64_t>(rng() % n))});
  }
  return g;
}

void TwoPatternJoin(benchmark::State& state) {
  auto g = call_graph(state.range(0));
  kg::PatternQuery q;
  q.patterns.push_back({kg::Variable{"m"}, kg::vocab::cem::calls, kg::Variable{"n"}});
  q.patterns.push_back({kg::Variable{"n"}, kg::vocab::rdf::type, kg::vocab::cem::Method});
  const kg::Graph* graphs[] = {&g};
  for (auto _ : state) benchmark::DoNotOptimize(kg::evaluate(q, graphs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(TwoPatternJoin)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void ThreeHopPath(benchmark::State& state) {
  auto g = call_graph(state.range(0));
  kg::PatternQuery q;
  q.patterns.push_back({kg::Variable{"a"}, kg::vocab::cem::calls, kg::Variable{"b"}});
  q.patterns.push_back({kg::Variable{"b"}, kg::vocab::cem::calls, kg::Variable{"c"}});
  q.patterns.push_back({kg::Variable{"c"}, kg::vocab::cem::calls, Iri{"mf", "m0"}});
  const kg::Graph* graphs[] = {&g};
  for (auto _ : state) benchmark::DoNotOptimize(kg::evaluate(q, graphs));
}
BENCHMARK(ThreeHopPath)->Arg(256)->Arg(1024);

void Insert(benchmark::State& state) {
  auto g = call_graph(state.range(0));
  std::vector<kg::Triple> triples(g.begin(), g.end());
  for (auto _ : state) {
    kg::Store store;
    store.create_graph({"graph", "code"});
    benchmark::DoNotOptimize(store.insert({"graph", "code"}, triples));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(triples.size()));
}
BENCHMARK(Insert)->Arg(1024);

}  // namespace
