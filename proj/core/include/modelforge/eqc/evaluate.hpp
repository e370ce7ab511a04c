#pragma once

#include "modelforge/eqc/equation.hpp"

namespace modelforge::eqc {

using Bindings = std::map<std::string, double, std::less<>>;

class EvalError : public std::runtime_error {
public:
  enum class Code { MissingBinding, DomainError };

  EvalError(Code code, std::string subject, const std::string& message)
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  Code code() const noexcept { return code_; }
  /// The missing variable, or the operation that left its domain.
  const std::string& subject() const noexcept { return subject_; }

private:
  Code code_;
  std::string subject_;
};

/// Recursive evaluation; `^` is real power and log is natural. Division by
/// zero, sqrt/log outside their domain and non-finite intermediate values
/// raise DomainError. Conditionals and logical operators short-circuit.
double evaluate(const Expr& e, const Bindings& bindings);

/// Requires a finite binding for every input of `fn`.
double evaluate(const FunctionDef& fn, const Bindings& bindings);

}  // namespace modelforge::eqc
