#pragma once

#include "modelforge/eqc/equation.hpp"

namespace modelforge::eqc {

/// Python source for one function:
///
///     def a(g, R, T):
///         return math.sqrt(g * R * T)
///
/// Power is `**`, functions map to `math.*` (and builtin `abs`), binary
/// operators get single spaces, parentheses appear only where the tree
/// structure needs them. Names that are Python keywords get a trailing `_`.
/// The caller supplies `import math`.
std::string emit_function_text(const FunctionDef& fn);

/// Just the Python expression for `e`.
std::string emit_expression(const Expr& e);

/// Identifier as emitted (keyword-safe).
std::string python_identifier(std::string_view name);

}  // namespace modelforge::eqc
