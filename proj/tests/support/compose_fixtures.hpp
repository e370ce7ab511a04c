#pragma once

// Model-card fixtures and an exhaustive reference planner.

#include "modelforge/compose/compose.hpp"

#include <optional>
#include <random>
#include <set>

namespace modelforge::testing {

using compose::ModelCard;
using kg::Iri;

inline Iri dom(const std::string& local) { return {"dom", local}; }

struct Arg {
  std::string var;
  std::string type;
  std::vector<std::string> units = {};
};

inline augtype::DataDescriptor desc(const Arg& a) {
  return {a.var, augtype::DataType::Float, augtype::AugmentedType{dom(a.type), a.type, a.units}};
}

inline ModelCard card(const std::string& model, const std::vector<Arg>& inputs, const Arg& output, const std::string& body) {
  ModelCard c;
  c.model = {"mf", model};
  c.fn.name = model;
  c.fn.output = output.var;
  c.fn.body = eqc::parse_expression(body);
  for (const auto& a : inputs) {
    c.inputs.push_back(desc(a));
    c.fn.inputs.push_back(a.var);
  }
  c.output = desc(output);
  return c;
}

inline ModelCard speed_of_sound() {
  return card("speedOfSound", {{"g", "RatioOfSpecificHeats"}, {"R", "GasConstant"}, {"T", "Temperature", {"K"}}},
              {"a", "SpeedOfSound", {"m/s"}}, "sqrt(g * R * T)");
}

inline std::vector<ModelCard> chain_cards() {
  return {
      card("temperatureAtAltitude", {{"h", "Altitude"}}, {"T", "Temperature", {"K"}}, "288.15 - 0.0065 * h"),
      speed_of_sound(),
      card("machNumber", {{"V", "Velocity"}, {"a", "SpeedOfSound", {"m/s"}}}, {"M", "MachNumber"}, "V / a"),
  };
}

// Minimum number of cards from which forward chaining reaches the target.
inline std::optional<std::size_t> exhaustive_minimum(const Iri& target, const std::set<Iri>& known, const std::vector<ModelCard>& cards) {
  if (known.count(target)) return 0;
  std::optional<std::size_t> best;
  for (unsigned mask = 1; mask < (1u << cards.size()); ++mask) {
    std::size_t n = static_cast<std::size_t>(__builtin_popcount(mask));
    if (best && n >= *best) continue;
    std::set<Iri> have = known;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t i = 0; i < cards.size(); ++i) {
        if (!(mask & (1u << i)) || have.count(cards[i].output.augmented_type->concept_iri)) continue;
        bool ready = true;
        for (const auto& in : cards[i].inputs) ready = ready && have.count(in.augmented_type->concept_iri);
        if (ready) {
          have.insert(cards[i].output.augmented_type->concept_iri);
          grew = true;
        }
      }
    }
    if (have.count(target)) best = n;
  }
  return best;
}

struct PlanningCase {
  std::vector<ModelCard> cards;
  std::set<Iri> known;
  Iri target;
};

// Up to six cards over six types, each summing up to three distinct inputs.
struct RandomPlanning {
  std::mt19937 rng;
  explicit RandomPlanning(unsigned seed) : rng(seed) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  PlanningCase next() {
    static const std::vector<std::string> types{"A", "B", "C", "D", "E", "F"};
    PlanningCase pc;
    std::size_t n = 1 + pick(6);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Arg> inputs;
      std::set<std::string> used;
      std::size_t k = pick(4);
      std::string out = types[pick(types.size())];
      std::string body = "1";
      for (std::size_t j = 0; j < k; ++j) {
        std::string t = types[pick(types.size())];
        if (t == out || !used.insert(t).second) continue;
        inputs.push_back({"v" + t, t});
        body += " + v" + t;
      }
      pc.cards.push_back(card("m" + std::to_string(pick(100)) + "_" + std::to_string(i), inputs, {"v" + out, out}, body));
    }
    for (const auto& t : types)
      if (pick(3) == 0) pc.known.insert(dom(t));
    pc.target = dom(types[pick(types.size())]);
    return pc;
  }
};

}  // namespace modelforge::testing
