#pragma once

#include "modelforge/eqc/expr.hpp"

#include <stdexcept>

namespace modelforge::eqc {

class EquationError : public std::runtime_error {
public:
  enum class Code {
    NoEquals,
    MultipleEquals,
    EmptySide,
    UnbalancedBrackets,
    UnknownToken,
    UnexpectedToken,
    NoLhsVariable,
    UnsolvableLhs,
    SelfReference,
  };

  EquationError(Code code, std::size_t position, std::string token, const std::string& message);

  Code code() const noexcept { return code_; }
  /// Byte offset into the original equation text.
  std::size_t position() const noexcept { return position_; }
  const std::string& token() const noexcept { return token_; }

private:
  Code code_;
  std::size_t position_;
  std::string token_;
};

std::string_view error_code_name(EquationError::Code code);

/// One executable reading of an equation, solved for `output`.
struct FunctionDef {
  std::string name;
  std::vector<std::string> inputs;
  std::string output;
  Expr body;

  bool operator==(const FunctionDef&) const = default;
};

/// Checks the FunctionDef invariants (distinct inputs, output not an input,
/// body free variables covered). Throws std::invalid_argument.
void validate(const FunctionDef& fn);

struct CompiledEquation {
  std::string original;
  Expr lhs;
  Expr rhs;
  std::vector<FunctionDef> interpretations;
};

/// Where an equation came from; drives generated function names.
struct EquationSource {
  std::string doc_id;
  int line = 0;
};

/// `<doc>_L<line>_<output>` with non-identifier characters folded to '_'.
std::string function_name(const EquationSource& src, std::string_view output);

/// Parses a text equation such as "a = sqrt [g * R * T]".
///
/// Bracket characters ([]{}()) are normalized to round brackets. The
/// scanner classifies one character at a time using the previous and next
/// characters; `^` takes a single atom or a whole bracket group as its base
/// and is right-associative; unary minus is accepted at the start of a side,
/// after `(`, after `^` and after another operator. `e^x` becomes exp(x).
/// Function words: sqrt exp log sin cos tan abs. Adjacent operands without
/// an operator are rejected rather than read as a product.
CompiledEquation parse_equation(std::string_view raw, const EquationSource* src = nullptr);

/// Parses one side on its own (no `=`).
Expr parse_expression(std::string_view text);

/// Solves lhs = rhs for each lhs variable. A single variable gives one
/// interpretation; `x op y` with op in + - * / gives two.
std::vector<FunctionDef> rearrange(const Expr& lhs, const Expr& rhs, const EquationSource* src = nullptr);

}  // namespace modelforge::eqc
