#pragma once

#include "modelforge/codex/io.hpp"
#include "modelforge/eqc/equation.hpp"

namespace modelforge::codex {

/// Methods with at least one arithmetic operator outside loop-counter
/// bookkeeping, ordered by (file, beginsAt).
std::vector<kg::Iri> select_computational_methods(const kg::Graph& code);

struct Translation {
  eqc::FunctionDef function;
  std::string text;  // emitted Python
};

/// Re-expresses a method as one eqc function by symbolic execution of its
/// stored source. Branches become conditionals (the rest of the method is
/// followed down both arms), Math.* calls map to eqc functions, and calls to
/// other translatable methods of the same class are inlined. Loops and calls
/// to anything else raise UnsupportedConstruct.
///
/// The output is `<method>_return`; a void method must write exactly one
/// output field, which becomes the output (renamed `<field>_new` when the
/// field is also read). Inputs are the parameters, then the implicit inputs
/// in alphabetical order.
Translation translate_method(const kg::Graph& code, const kg::Iri& method, const MethodIoReport& io);

}  // namespace modelforge::codex
