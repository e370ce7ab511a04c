#include "modelforge/compose/compose.hpp"
#include "modelforge/eqc/evaluate.hpp"

#include <algorithm>
#include <functional>

namespace modelforge::compose {

using kg::Iri;

namespace {

const Iri& type_of(const augtype::DataDescriptor& d) { return d.augmented_type->concept_iri; }

bool units_compatible(const augtype::DataDescriptor& produced, const augtype::DataDescriptor& consumed) {
  const auto& a = produced.augmented_type->units;
  const auto& b = consumed.augmented_type->units;
  return a.empty() || b.empty() || a == b;
}

void check_typed(const ModelCard& c) {
  auto typed = [](const augtype::DataDescriptor& d) { return d.augmented_type.has_value(); };
  if (!typed(c.output) || !std::all_of(c.inputs.begin(), c.inputs.end(), typed))
    throw ComposeError(ComposeError::Code::UntypedCard, "model " + c.model.str() + " has untyped arguments");
  if (c.inputs.size() != c.fn.inputs.size())
    throw ComposeError(ComposeError::Code::UntypedCard, "model " + c.model.str() + " descriptors do not match its function");
}

class Search {
public:
  Search(const std::set<Iri>& known, const std::vector<const ModelCard*>& cards) : known_(known), cards_(cards) {
    for (std::size_t i = 0; i < cards_.size(); ++i) producers_[type_of(cards_[i]->output)].push_back(i);
  }

  /// All minimal selections (type -> card index) that reach `target`.
  std::vector<std::map<Iri, std::size_t>> run(const Iri& target) {
    for (limit_ = 1; limit_ <= cards_.size() && found_.empty(); ++limit_) {
      std::map<Iri, std::size_t> chosen;
      dfs(chosen, {target});
    }
    return found_;
  }

  bool unit_blocked() const { return unit_blocked_; }

private:
  void dfs(std::map<Iri, std::size_t>& chosen, const std::set<Iri>& open) {
    if (open.empty()) {
      found_.push_back(chosen);
      return;
    }
    if (chosen.size() + open.size() > limit_) return;
    const Iri goal = *open.begin();
    auto it = producers_.find(goal);
    if (it == producers_.end()) return;
    for (std::size_t p : it->second) {
      const ModelCard& card = *cards_[p];
      if (!compatible(chosen, goal, card)) {
        unit_blocked_ = true;
        continue;
      }
      chosen.emplace(goal, p);
      if (!cyclic(chosen)) {
        std::set<Iri> next = open;
        next.erase(goal);
        for (const auto& in : card.inputs) {
          const Iri& t = type_of(in);
          if (!known_.count(t) && !chosen.count(t)) next.insert(t);
        }
        dfs(chosen, next);
      }
      chosen.erase(goal);
    }
  }

  // Units must agree between `card` and whatever already consumes `goal`,
  // and between `card`'s inputs and their chosen producers.
  bool compatible(const std::map<Iri, std::size_t>& chosen, const Iri& goal, const ModelCard& card) const {
    for (const auto& [t, c] : chosen) {
      for (const auto& in : cards_[c]->inputs) {
        if (type_of(in) == goal && !units_compatible(card.output, in)) return false;
      }
    }
    for (const auto& in : card.inputs) {
      auto it = chosen.find(type_of(in));
      if (it != chosen.end() && !units_compatible(cards_[it->second]->output, in)) return false;
    }
    return true;
  }

  bool cyclic(const std::map<Iri, std::size_t>& chosen) const {
    std::map<Iri, int> state;  // 1 visiting, 2 done
    std::function<bool(const Iri&)> visit = [&](const Iri& t) {
      auto it = chosen.find(t);
      if (it == chosen.end()) return false;
      int& s = state[t];
      if (s == 1) return true;
      if (s == 2) return false;
      s = 1;
      for (const auto& in : cards_[it->second]->inputs) {
        if (!known_.count(type_of(in)) && visit(type_of(in))) return true;
      }
      state[t] = 2;
      return false;
    };
    return std::any_of(chosen.begin(), chosen.end(), [&](const auto& kv) { return visit(kv.first); });
  }

  const std::set<Iri>& known_;
  const std::vector<const ModelCard*>& cards_;
  std::map<Iri, std::vector<std::size_t>> producers_;
  std::vector<std::map<Iri, std::size_t>> found_;
  std::size_t limit_ = 0;
  bool unit_blocked_ = false;
};

std::vector<Iri> unreachable_types(const Iri& target, const std::set<Iri>& known, const std::vector<const ModelCard*>& cards) {
  std::set<Iri> derivable = known;
  for (bool grew = true; grew;) {
    grew = false;
    for (const ModelCard* c : cards) {
      if (derivable.count(type_of(c->output))) continue;
      if (std::all_of(c->inputs.begin(), c->inputs.end(), [&](const auto& in) { return derivable.count(type_of(in)) > 0; })) {
        derivable.insert(type_of(c->output));
        grew = true;
      }
    }
  }
  if (derivable.count(target)) return {};
  // Types in the target's backward cone that nothing produces.
  std::set<Iri> seen{target}, gaps;
  std::vector<Iri> todo{target};
  while (!todo.empty()) {
    Iri t = todo.back();
    todo.pop_back();
    bool produced = false;
    for (const ModelCard* c : cards) {
      if (type_of(c->output) != t) continue;
      produced = true;
      for (const auto& in : c->inputs) {
        if (!derivable.count(type_of(in)) && seen.insert(type_of(in)).second) todo.push_back(type_of(in));
      }
    }
    if (!produced) gaps.insert(t);
  }
  if (gaps.empty()) gaps.insert(target);
  return {gaps.begin(), gaps.end()};
}

}  // namespace

ModelCard make_card(Iri model, eqc::FunctionDef fn, const std::vector<augtype::VariableBinding>& bindings) {
  auto d = augtype::to_data_descriptors(fn, bindings);
  if (!d.missing.empty()) {
    std::string names;
    for (const auto& m : d.missing) names += (names.empty() ? "" : ", ") + m;
    throw ComposeError(ComposeError::Code::UntypedCard, "model " + model.str() + " has untyped arguments: " + names);
  }
  return {std::move(model), std::move(d.inputs), std::move(d.output), std::move(fn)};
}

WorkflowPlan plan(const Iri& target, const std::set<Iri>& known, const std::vector<ModelCard>& cards) {
  for (const auto& c : cards) check_typed(c);
  WorkflowPlan out;
  out.target = target;
  if (known.count(target)) return out;

  std::vector<const ModelCard*> sorted;
  for (const auto& c : cards) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const ModelCard* a, const ModelCard* b) { return a->model < b->model; });

  Search search(known, sorted);
  auto found = search.run(target);
  if (found.empty()) {
    auto gaps = unreachable_types(target, known, sorted);
    if (gaps.empty() && search.unit_blocked())
      throw ComposeError(ComposeError::Code::UnitMismatch, "no plan for " + target.str() + " with compatible units");
    if (gaps.empty()) gaps.push_back(target);
    std::string names;
    for (const auto& g : gaps) names += (names.empty() ? "" : ", ") + g.str();
    throw ComposeError(ComposeError::Code::NoPlan, "no plan for " + target.str() + "; unreachable: " + names, gaps);
  }

  auto key = [&](const std::map<Iri, std::size_t>& sel) {
    std::vector<std::size_t> k;
    for (const auto& [t, i] : sel) k.push_back(i);
    std::sort(k.begin(), k.end());
    return k;
  };
  const auto& best = *std::min_element(found.begin(), found.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });

  // Topological order, ready cards taken by model IRI.
  std::map<Iri, std::size_t> step_of;
  std::set<std::size_t> pending;
  for (const auto& [t, i] : best) pending.insert(i);
  while (!pending.empty()) {
    for (std::size_t i : pending) {
      const ModelCard& c = *sorted[i];
      bool ready = std::all_of(c.inputs.begin(), c.inputs.end(),
                               [&](const auto& in) { return known.count(type_of(in)) || step_of.count(type_of(in)); });
      if (!ready) continue;
      PlanStep step{c, {}};
      for (const auto& in : c.inputs) {
        const Iri& t = type_of(in);
        step.bindings[t] = known.count(t) ? Source{} : Source{step_of.at(t)};
      }
      step_of[type_of(c.output)] = out.steps.size();
      out.steps.push_back(std::move(step));
      pending.erase(i);
      break;
    }
  }
  return out;
}

Quantities execute(const WorkflowPlan& plan, const Quantities& values) {
  Quantities out = values;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const ModelCard& c = plan.steps[i].card;
    eqc::Bindings b;
    for (const auto& in : c.inputs) {
      auto it = out.find(type_of(in));
      if (it == out.end())
        throw ComposeError(ComposeError::Code::MissingBinding,
                           "step " + std::to_string(i) + " (" + c.model.str() + "): no value for " + in.name, {}, i, in.name);
      b[in.name] = it->second;
    }
    try {
      out[type_of(c.output)] = eqc::evaluate(c.fn, b);
    } catch (const eqc::EvalError& e) {
      auto code = e.code() == eqc::EvalError::Code::DomainError ? ComposeError::Code::DomainError
                                                                 : ComposeError::Code::MissingBinding;
      throw ComposeError(code, "step " + std::to_string(i) + " (" + c.model.str() + "): " + e.what(), {}, i, e.subject());
    }
  }
  return out;
}

}  // namespace modelforge::compose
