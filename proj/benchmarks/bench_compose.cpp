#include "modelforge/compose/compose.hpp"

#include <benchmark/benchmark.h>

using namespace modelforge;
using kg::Iri;

namespace {

augtype::DataDescriptor desc(const std::string& var, const std::string& type) {
  return {var, augtype::DataType::Float, augtype::AugmentedType{{"dom", type}, type, {}}};
}

// A chain Q0 -> Q1 -> ... -> Qn with a decoy producer for every link.
std::vector<compose::ModelCard> chain(std::int64_t n) {
  std::vector<compose::ModelCard> cards;
  for (std::int64_t i = 0; i < n; ++i) {
    for (int decoy = 0; decoy < 2; ++decoy) {
      compose::ModelCard c;
      std::string in = "Q" + std::to_string(decoy ? i + n + 1 : i);
      c.model = {"mf", "f" + std::to_string(i) + "_" + std::to_string(decoy)};
      c.fn.name = c.model.local;
      c.fn.inputs = {"x"};
      c.fn.output = "y";
      c.fn.body = eqc::parse_expression("2 * x + 1");
      c.inputs = {desc("x", in)};
      c.output = desc("y", "Q" + std::to_string(i + 1));
      cards.push_back(std::move(c));
    }
  }
  return cards;
}

void PlanChain(benchmark::State& state) {
  auto cards = chain(state.range(0));
  Iri target{"dom", "Q" + std::to_string(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(compose::plan(target, {Iri{"dom", "Q0"}}, cards));
}
BENCHMARK(PlanChain)->DenseRange(2, 8, 2);

void ExecuteChain(benchmark::State& state) {
  auto cards = chain(8);
  auto p = compose::plan({"dom", "Q8"}, {Iri{"dom", "Q0"}}, cards);
  for (auto _ : state) benchmark::DoNotOptimize(compose::execute(p, {{Iri{"dom", "Q0"}, 1.0}}));
}
BENCHMARK(ExecuteChain);

}  // namespace
