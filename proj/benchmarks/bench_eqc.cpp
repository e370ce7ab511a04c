#include "modelforge/eqc/emit.hpp"
#include "modelforge/eqc/equation.hpp"
#include "modelforge/eqc/evaluate.hpp"

#include <benchmark/benchmark.h>

using namespace modelforge;

namespace {

const char* const kEquations[] = {
    "a = sqrt [g * R * T]",
    "a * b = c + d",
    "E2 - E1 = Q - W",
    "p / p0 = (1 + (g - 1) / 2 * M^2) ^ (-g / (g - 1))",
    "F = mdot * Ve + (pe - p0) * Ae",
    "dv = Veq * log(mi / mf)",
};

void ParseEquation(benchmark::State& state) {
  const char* raw = kEquations[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(eqc::parse_equation(raw));
  state.SetLabel(raw);
}
BENCHMARK(ParseEquation)->DenseRange(0, 5);

void Evaluate(benchmark::State& state) {
  auto fn = eqc::parse_equation("p / p0 = (1 + (g - 1) / 2 * M^2) ^ (-g / (g - 1))").interpretations.front();
  eqc::Bindings b{{"p0", 101325.0}, {"g", 1.4}, {"M", 0.8}, {"p", 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(eqc::evaluate(fn, b));
}
BENCHMARK(Evaluate);

void EmitFunctionText(benchmark::State& state) {
  auto fn = eqc::parse_equation("F = mdot * Ve + (pe - p0) * Ae").interpretations.front();
  for (auto _ : state) benchmark::DoNotOptimize(eqc::emit_function_text(fn));
}
BENCHMARK(EmitFunctionText);

}  // namespace
