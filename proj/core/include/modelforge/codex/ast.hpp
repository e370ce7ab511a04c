#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Syntax tree for the supported Java subset: classes with fields, methods and
// constructors; typed locals; assignments; if/else, for, while; calls;
// returns; line and block comments.
namespace modelforge::codex {

inline constexpr const char* kLanguageTag = "java-subset/1";

struct SourceUnit {
  std::string path;
  std::string text;
  std::string language_tag = kLanguageTag;
};

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(int line, int column, std::string expected, const std::string& found);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

private:
  int line_;
  int column_;
  std::string expected_;
};

struct Span {
  int begin_line = 0;
  int end_line = 0;
  int column = 0;
};

struct JExpr {
  enum class Kind {
    Number,   // text is the lexeme, suffix stripped
    String,   // text is the unescaped value
    Bool,     // text is "true" / "false"
    Name,     // text is the dotted name; `this.` is stripped and `qualified_this` set
    Binary,   // text is the operator, args = {lhs, rhs}
    Unary,    // text is "-", "+" or "!"
    Ternary,  // args = {cond, then, else}
    Call,     // text is the dotted callee, args are the arguments
    New,      // text is the type name
    Cast,     // text is the target type, args = {operand}
  };

  Kind kind = Kind::Number;
  std::string text;
  std::vector<JExpr> args;
  Span span;
  bool qualified_this = false;
  bool parenthesized = false;
  bool integral = false;  // Number without fraction or exponent
};

struct JStmt {
  enum class Kind { VarDecl, Assign, If, While, For, Call, Return, Block, Break, Continue, Empty };

  Kind kind = Kind::Empty;
  int id = 0;
  Span span;

  std::string type;    // VarDecl
  std::string target;  // VarDecl, Assign
  bool target_this = false;
  std::string op;      // Assign: "=", "+=", ...
  bool increment = false;  // Assign spelled `x++`, `--x`, ...

  std::optional<JExpr> expr;  // initializer, assigned value, condition, call, return value
  std::vector<JStmt> body;    // then-branch, loop body, block contents
  std::vector<JStmt> else_body;
  bool has_else = false;
  std::vector<JStmt> init;    // for-loop header
  std::vector<JStmt> update;
};

struct Param {
  std::string name;
  std::string type;
};

struct FieldDecl {
  int id = 0;
  std::string name;
  std::string type;
  std::optional<JExpr> init;
  Span span;
};

struct MethodDecl {
  int id = 0;
  std::string name;
  std::string return_type;  // empty for constructors
  std::vector<Param> params;
  std::vector<JStmt> body;
  Span span;
  std::size_t begin_offset = 0;  // byte range of the declaration, modifiers included
  std::size_t end_offset = 0;
  bool is_constructor = false;
};

struct ClassDecl {
  int id = 0;
  std::string name;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  Span span;
};

struct Comment {
  std::string text;  // without the comment markers
  Span span;
  int attached_to = 0;  // node id, 0 when unattached
};

struct CompilationUnit {
  std::string path;
  std::string package;
  std::vector<std::string> imports;
  std::vector<ClassDecl> classes;
  std::vector<Comment> comments;
  std::string text;
};

/// Parses a whole file. Node ids are assigned in source order starting at 1.
/// Each comment is attached to the nearest node that starts on the comment's
/// last line or the line after it (declarations win ties), else left free.
CompilationUnit parse_source(const SourceUnit& unit);

/// Parses a single method declaration (as stored in a code graph) in the
/// context of an otherwise empty class.
MethodDecl parse_method(std::string_view text);

/// Dotted callee split into qualifier and method name: "Math.sqrt" -> {"Math", "sqrt"}.
std::pair<std::string, std::string> split_callee(std::string_view callee);

}  // namespace modelforge::codex
