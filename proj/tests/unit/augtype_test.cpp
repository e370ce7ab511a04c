#include "modelforge/augtype/augtype.hpp"
#include "modelforge/kg/store.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace modelforge;
using namespace modelforge::augtype;
namespace fs = std::filesystem;

namespace {

const fs::path kText = fs::path(MODELFORGE_TEST_DATA) / "text";

textex::DocumentText page(const std::string& name) {
  std::ifstream in(kText / "pages" / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return textex::DocumentText::from_text(name, ss.str());
}

const textex::ConceptDictionary& dict() {
  static const textex::ConceptDictionary d = [] {
    kg::Store store;
    auto id = store.load(fs::path(MODELFORGE_DATA_DIR) / "ontology.graph");
    return textex::build_dictionary(store.snapshot(id));
  }();
  return d;
}

kg::Iri dom(const std::string& local) { return {"dom", local}; }

struct Context {
  textex::DocumentText doc;
  textex::EquationSpan span;
  eqc::CompiledEquation eq;
};

Context at(textex::DocumentText doc, int line) {
  for (const auto& s : textex::detect_equations(doc)) {
    if (s.first_line == line) return {doc, s, eqc::parse_equation(s.raw)};
  }
  throw std::runtime_error("no equation on line " + std::to_string(line));
}

std::vector<VariableBinding> bind(const Context& c, int window = kWindow) {
  return extract_augmented_types(c.span, c.eq, c.doc, textex::extract_concepts(c.doc, dict()), dict(), window);
}

std::map<std::string, std::string> by_var(const std::vector<VariableBinding>& b) {
  std::map<std::string, std::string> out;
  for (const auto& x : b) out[x.variable] = x.type.concept_iri.local;
  return out;
}

}  // namespace

TEST(Bind, SpeedOfSoundPassage) {
  auto b = bind(at(page("p01_speed_of_sound.txt"), 8));
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b[0].variable, "R");
  EXPECT_EQ(b[0].type.concept_iri, dom("GasConstant"));
  EXPECT_EQ(b[1].variable, "T");
  EXPECT_EQ(b[1].type.concept_iri, dom("Temperature"));
  EXPECT_EQ(b[2].variable, "a");
  EXPECT_EQ(b[2].type.concept_iri, dom("SpeedOfSound"));
  EXPECT_EQ(b[2].type.label, "speed of sound");
  EXPECT_EQ(b[3].variable, "g");
  EXPECT_EQ(b[3].type.concept_iri, dom("RatioOfSpecificHeats"));
  for (const auto& x : b) {
    EXPECT_EQ(x.evidence_line, 6);
    EXPECT_EQ(x.rule, kConceptToken);
  }
  EXPECT_FALSE(b[2].type.units.empty());
}

TEST(Bind, WindowBoundary) {
  std::string text =
      "the temperature T is measured here\n"
      "filler line\n"
      "filler line\n"
      "filler line\n"
      "the pressure p is measured there\n"
      "filler line\n"
      "filler line\n"
      "filler line\n"
      "x = p * T\n";
  auto c = at(textex::DocumentText::from_text("w", text), 9);
  // Line 5 sits 4 above the equation: outside the default window.
  EXPECT_TRUE(bind(c).empty());
  auto wide = by_var(bind(c, 4));
  EXPECT_EQ(wide, (std::map<std::string, std::string>{{"p", "Pressure"}}));
  auto wider = by_var(bind(c, 8));
  EXPECT_EQ(wider.size(), 2u);
}

TEST(Bind, RulesAndPriority) {
  std::string text =
      "where m is the mass and the force is defined as F.\n"
      "F = m * A\n"
      "with velocity A as a test of priority, and A is the acceleration\n";
  auto b = bind(at(textex::DocumentText::from_text("r", text), 2));
  std::map<std::string, const VariableBinding*> got;
  for (const auto& x : b) got[x.variable] = &x;
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got["m"]->rule, kTokenIsConcept);
  EXPECT_EQ(got["m"]->type.concept_iri, dom("Mass"));
  EXPECT_EQ(got["F"]->rule, kConceptDefinedAs);
  EXPECT_EQ(got["F"]->type.concept_iri, dom("Force"));
  // "velocity A" (R1) outranks "A is the acceleration" (R2) on the same line.
  EXPECT_EQ(got["A"]->rule, kConceptToken);
  EXPECT_EQ(got["A"]->type.concept_iri, dom("Velocity"));
}

TEST(Bind, OnlyEquationVariables) {
  std::string text = "the temperature T and the pressure p\ny = 2 * T\n";
  auto b = by_var(bind(at(textex::DocumentText::from_text("o", text), 2)));
  EXPECT_EQ(b, (std::map<std::string, std::string>{{"T", "Temperature"}}));
}

TEST(Bind, CloserLineWins) {
  std::string text = "the pressure q\nfiller line\nthe dynamic pressure q\ny = q / 2\nthe density q\n";
  auto b = bind(at(textex::DocumentText::from_text("c", text), 4));
  ASSERT_EQ(b.size(), 1u);
  // Lines 3 and 5 are both one away; above wins.
  EXPECT_EQ(b[0].type.concept_iri, dom("DynamicPressure"));
  EXPECT_EQ(b[0].evidence_line, 3);
}

TEST(Comment, BindsFunctionNames) {
  eqc::FunctionDef fn{"kinetic", {"m", "V"}, "KE", eqc::parse_expression("0.5 * m * V^2")};
  auto b = by_var(bindings_from_comment(fn, "// kinetic energy KE of a mass m\n// moving at velocity V", dict()));
  EXPECT_EQ(b, (std::map<std::string, std::string>{{"KE", "KineticEnergy"}, {"V", "Velocity"}, {"m", "Mass"}}));
}

TEST(Descriptors, InputsOutputAndMissing) {
  eqc::FunctionDef fn{"f", {"g", "R", "T"}, "a", eqc::parse_expression("sqrt(g * R * T)")};
  auto c = at(page("p01_speed_of_sound.txt"), 8);
  auto b = bind(c);
  std::erase_if(b, [](const auto& x) { return x.variable == "g"; });
  auto d = to_data_descriptors(fn, b);
  ASSERT_EQ(d.inputs.size(), 3u);
  EXPECT_EQ(d.inputs[0].name, "g");
  EXPECT_FALSE(d.inputs[0].augmented_type);
  EXPECT_EQ(d.inputs[1].augmented_type->concept_iri, dom("GasConstant"));
  EXPECT_EQ(d.inputs[2].datatype, DataType::Float);
  EXPECT_EQ(d.output.name, "a");
  EXPECT_EQ(d.output.augmented_type->concept_iri, dom("SpeedOfSound"));
  EXPECT_EQ(d.missing, std::vector<std::string>{"g"});
  EXPECT_EQ(datatype_name(d.output.datatype), "float");
}

TEST(Descriptors, EveryNameAppearsOnceProperty) {
  for (const auto& entry : fs::directory_iterator(kText / "pages")) {
    auto doc = page(entry.path().filename().string());
    auto mentions = textex::extract_concepts(doc, dict());
    for (const auto& span : textex::detect_equations(doc)) {
      eqc::CompiledEquation eq;
      try {
        eq = eqc::parse_equation(span.raw);
      } catch (const eqc::EquationError&) {
        continue;
      }
      auto b = extract_augmented_types(span, eq, doc, mentions, dict());
      for (std::size_t i = 1; i < b.size(); ++i) ASSERT_LT(b[i - 1].variable, b[i].variable);
      for (const auto& x : b) {
        EXPECT_GE(x.evidence_line, span.first_line - kWindow);
        EXPECT_LE(x.evidence_line, span.last_line + kWindow);
      }
      for (const auto& fn : eq.interpretations) {
        auto d = to_data_descriptors(fn, b);
        std::size_t bound = 0;
        for (const auto& in : d.inputs) bound += in.augmented_type.has_value();
        bound += d.output.augmented_type.has_value();
        EXPECT_EQ(bound + d.missing.size(), fn.inputs.size() + 1);
      }
    }
  }
}

TEST(Corpus, RecallOnAnnotatedContexts) {
  std::ifstream in(kText / "augtype_gold.json");
  auto gold = nlohmann::json::parse(in);
  ASSERT_GE(gold.size(), 30u);
  int total = 0, correct = 0, predicted = 0;
  for (const auto& ctx : gold) {
    auto got = by_var(bind(at(page(ctx["page"]), ctx["line"])));
    predicted += static_cast<int>(got.size());
    for (const auto& [var, label] : ctx["bindings"].items()) {
      auto want = dict().lookup(label.get<std::string>());
      ASSERT_TRUE(want) << label;
      ++total;
      auto it = got.find(var);
      if (it != got.end() && it->second == want->local) ++correct;
    }
  }
  double recall = correct / static_cast<double>(total);
  double precision = correct / static_cast<double>(predicted);
  RecordProperty("recall", std::to_string(recall));
  RecordProperty("precision", std::to_string(precision));
  EXPECT_GE(recall, 0.5);
  EXPECT_GE(precision, 0.9);
}
