#pragma once

#include "modelforge/augtype/augtype.hpp"

#include <set>

namespace modelforge::compose {

/// A fully curated model: every descriptor carries an augmented type.
struct ModelCard {
  kg::Iri model;
  std::vector<augtype::DataDescriptor> inputs;  // same order as fn.inputs
  augtype::DataDescriptor output;
  eqc::FunctionDef fn;

  bool operator==(const ModelCard&) const = default;
};

/// Where a step input comes from: the caller's givens, or an earlier step.
struct Source {
  std::optional<std::size_t> step;

  bool given() const { return !step.has_value(); }
  bool operator==(const Source&) const = default;
};

struct PlanStep {
  ModelCard card;
  std::map<kg::Iri, Source> bindings;  // input augmented type -> source

  bool operator==(const PlanStep&) const = default;
};

struct WorkflowPlan {
  kg::Iri target;
  std::vector<PlanStep> steps;

  bool operator==(const WorkflowPlan&) const = default;
};

class ComposeError : public std::runtime_error {
public:
  enum class Code { NoPlan, UntypedCard, UnitMismatch, MissingBinding, DomainError };

  ComposeError(Code code, const std::string& message, std::vector<kg::Iri> unreachable = {},
               std::optional<std::size_t> step = {}, std::string subject = {})
      : std::runtime_error(message),
        code_(code),
        unreachable_(std::move(unreachable)),
        step_(step),
        subject_(std::move(subject)) {}

  Code code() const noexcept { return code_; }
  /// NoPlan: the types no card set could produce.
  const std::vector<kg::Iri>& unreachable() const noexcept { return unreachable_; }
  /// Execution errors: index of the failing step.
  std::optional<std::size_t> step() const noexcept { return step_; }
  /// The missing variable or the operation that left its domain.
  const std::string& subject() const noexcept { return subject_; }

private:
  Code code_;
  std::vector<kg::Iri> unreachable_;
  std::optional<std::size_t> step_;
  std::string subject_;
};

/// Builds a card, checking that the descriptors match the function and all
/// carry augmented types. Throws UntypedCard.
ModelCard make_card(kg::Iri model, eqc::FunctionDef fn, const std::vector<augtype::VariableBinding>& bindings);

/// Backward chaining from `target` over the cards' augmented types. Each
/// type gets at most one producer. Among the plans with the fewest steps the
/// one whose sorted model IRIs compare least wins; steps are ordered so every
/// input is produced before use, ties broken by model IRI.
///
/// A producer whose output units differ from the consumer's declared units
/// (both non-empty) cannot feed it. If that is the only reason no plan
/// exists the error is UnitMismatch, otherwise NoPlan.
WorkflowPlan plan(const kg::Iri& target, const std::set<kg::Iri>& known, const std::vector<ModelCard>& cards);

using Quantities = std::map<kg::Iri, double>;

/// Runs the steps in order. Returns the givens plus every produced value.
Quantities execute(const WorkflowPlan& plan, const Quantities& values);

}  // namespace modelforge::compose
