#include "modelforge/compose/compose.hpp"

#include "compose_fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace modelforge;
using namespace modelforge::compose;
using kg::Iri;

namespace {

using namespace modelforge::testing;

ComposeError::Code code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ComposeError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ComposeError";
  return ComposeError::Code::NoPlan;
}

}  // namespace

TEST(Plan, KnownTargetIsEmptyPlan) {
  auto p = plan(dom("X"), {dom("X")}, chain_cards());
  EXPECT_TRUE(p.steps.empty());
  auto out = execute(p, {{dom("X"), 5.0}});
  EXPECT_EQ(out, (Quantities{{dom("X"), 5.0}}));
}

TEST(Plan, OneStepSpeedOfSound) {
  std::set<Iri> known{dom("RatioOfSpecificHeats"), dom("GasConstant"), dom("Temperature")};
  auto p = plan(dom("SpeedOfSound"), known, {speed_of_sound()});
  ASSERT_EQ(p.steps.size(), 1u);
  for (const auto& [t, src] : p.steps[0].bindings) EXPECT_TRUE(src.given());
  auto out = execute(p, {{dom("RatioOfSpecificHeats"), 1.4}, {dom("GasConstant"), 286.0}, {dom("Temperature"), 300.0}});
  EXPECT_NEAR(out.at(dom("SpeedOfSound")), std::sqrt(1.4 * 286.0 * 300.0), 1e-9);
  EXPECT_NEAR(out.at(dom("SpeedOfSound")), 346.5834, 1e-4);
}

TEST(Plan, ThreeCardChain) {
  std::set<Iri> known{dom("Altitude"), dom("RatioOfSpecificHeats"), dom("GasConstant"), dom("Velocity")};
  auto p = plan(dom("MachNumber"), known, chain_cards());
  ASSERT_EQ(p.steps.size(), 3u);
  EXPECT_EQ(p.steps[0].card.model.local, "temperatureAtAltitude");
  EXPECT_EQ(p.steps[1].card.model.local, "speedOfSound");
  EXPECT_EQ(p.steps[2].card.model.local, "machNumber");
  EXPECT_EQ(p.steps[1].bindings.at(dom("Temperature")), Source{0});
  EXPECT_EQ(p.steps[2].bindings.at(dom("SpeedOfSound")), Source{1});
  EXPECT_TRUE(p.steps[2].bindings.at(dom("Velocity")).given());
  Quantities given{{dom("Altitude"), 1000.0}, {dom("RatioOfSpecificHeats"), 1.4}, {dom("GasConstant"), 287.0},
                   {dom("Velocity"), 250.0}};
  auto out = execute(p, given);
  // Hand-computed: T = 281.65 K, a = 336.4029875016 m/s, M = 250 / a.
  EXPECT_NEAR(out.at(dom("Temperature")), 281.65, 281.65 * 1e-6);
  EXPECT_NEAR(out.at(dom("SpeedOfSound")), 336.4029875016, 336.4 * 1e-6);
  EXPECT_NEAR(out.at(dom("MachNumber")), 0.7431563015, 0.743 * 1e-6);
  EXPECT_EQ(execute(p, given), out);
}

TEST(Plan, NoProducerIsNoPlan) {
  try {
    plan(dom("MachNumber"), {dom("Altitude")}, chain_cards());
    FAIL() << "expected NoPlan";
  } catch (const ComposeError& e) {
    EXPECT_EQ(e.code(), ComposeError::Code::NoPlan);
    EXPECT_EQ(e.unreachable(), (std::vector<Iri>{dom("GasConstant"), dom("RatioOfSpecificHeats"), dom("Velocity")}));
  }
  EXPECT_EQ(code_of([] { plan(dom("Nothing"), {}, chain_cards()); }), ComposeError::Code::NoPlan);
}

TEST(Plan, CyclesAreNotPlans) {
  std::vector<ModelCard> cards{card("xFromY", {{"y", "Y"}}, {"x", "X"}, "y + 1"),
                               card("yFromX", {{"x", "X"}}, {"y", "Y"}, "x - 1")};
  EXPECT_EQ(code_of([&] { plan(dom("X"), {}, cards); }), ComposeError::Code::NoPlan);
  EXPECT_EQ(plan(dom("X"), {dom("Y")}, cards).steps.size(), 1u);
}

TEST(Plan, FewestStepsThenModelIri) {
  std::vector<ModelCard> cards{
      card("b", {{"x", "X"}}, {"z", "Z"}, "x * 2"),
      card("a", {{"x", "X"}}, {"z", "Z"}, "x * 3"),
      card("long1", {{"x", "X"}}, {"y", "Y"}, "x"),
      card("aa", {{"y", "Y"}}, {"z", "Z"}, "y"),
  };
  auto p = plan(dom("Z"), {dom("X")}, cards);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0].card.model.local, "a");
}

TEST(Plan, UnitMismatchIsAPlanningError) {
  std::vector<ModelCard> cards{
      card("tempF", {{"h", "Altitude"}}, {"T", "Temperature", {"degF"}}, "59 - 0.00356 * h"),
      speed_of_sound(),
  };
  std::set<Iri> known{dom("Altitude"), dom("RatioOfSpecificHeats"), dom("GasConstant")};
  EXPECT_EQ(code_of([&] { plan(dom("SpeedOfSound"), known, cards); }), ComposeError::Code::UnitMismatch);
  cards.push_back(card("tempK", {{"h", "Altitude"}}, {"T", "Temperature", {"K"}}, "288.15 - 0.0065 * h"));
  auto p = plan(dom("SpeedOfSound"), known, cards);
  EXPECT_EQ(p.steps.front().card.model.local, "tempK");
}

TEST(Plan, UntypedCardsAreRejected) {
  auto c = speed_of_sound();
  c.inputs[0].augmented_type.reset();
  EXPECT_EQ(code_of([&] { plan(dom("SpeedOfSound"), {}, {c}); }), ComposeError::Code::UntypedCard);
  eqc::FunctionDef fn{"f", {"x"}, "y", eqc::parse_expression("x + 1")};
  EXPECT_EQ(code_of([&] { make_card({"mf", "f"}, fn, {}); }), ComposeError::Code::UntypedCard);
}

TEST(Execute, DomainErrorNamesTheStep) {
  std::vector<ModelCard> cards{card("first", {{"x", "X"}}, {"y", "Y"}, "x - 1"),
                               card("second", {{"y", "Y"}}, {"z", "Z"}, "1 / y")};
  auto p = plan(dom("Z"), {dom("X")}, cards);
  try {
    execute(p, {{dom("X"), 1.0}});
    FAIL() << "expected DomainError";
  } catch (const ComposeError& e) {
    EXPECT_EQ(e.code(), ComposeError::Code::DomainError);
    EXPECT_EQ(e.step(), 1u);
  }
  try {
    execute(p, {});
    FAIL() << "expected MissingBinding";
  } catch (const ComposeError& e) {
    EXPECT_EQ(e.code(), ComposeError::Code::MissingBinding);
    EXPECT_EQ(e.step(), 0u);
    EXPECT_EQ(e.subject(), "x");
  }
}

TEST(Plan, MinimalAgainstExhaustiveSearchProperty) {
  RandomPlanning gen(2024);
  int planned = 0;
  for (int round = 0; round < 300; ++round) {
    auto [cards, known, target] = gen.next();
    auto want = exhaustive_minimum(target, known, cards);
    try {
      auto p = plan(target, known, cards);
      ASSERT_TRUE(want) << "round " << round;
      ASSERT_EQ(p.steps.size(), *want) << "round " << round;
      if (!p.steps.empty()) EXPECT_EQ(p.steps.back().card.output.augmented_type->concept_iri, target);
      Quantities given;
      for (const auto& t : known) given[t] = 1.0;
      auto out = execute(p, given);
      EXPECT_TRUE(out.count(target));
      EXPECT_EQ(execute(p, given), out);
      for (std::size_t s = 0; s < p.steps.size(); ++s) {
        for (const auto& [t, src] : p.steps[s].bindings) {
          if (src.given()) {
            EXPECT_TRUE(known.count(t));
          } else {
            EXPECT_LT(*src.step, s);
          }
        }
      }
      ++planned;
    } catch (const ComposeError& e) {
      ASSERT_EQ(e.code(), ComposeError::Code::NoPlan);
      ASSERT_FALSE(want) << "round " << round;
    }
  }
  EXPECT_GT(planned, 60);
}
