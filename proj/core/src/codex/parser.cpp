#include "modelforge/codex/ast.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <tuple>

namespace modelforge::codex {

SyntaxError::SyntaxError(int line, int column, std::string expected, const std::string& found)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": expected " +
                         expected + ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

std::pair<std::string, std::string> split_callee(std::string_view callee) {
  auto dot = callee.rfind('.');
  if (dot == std::string_view::npos) return {"", std::string(callee)};
  return {std::string(callee.substr(0, dot)), std::string(callee.substr(dot + 1))};
}

namespace {

enum class T { Ident, Number, String, Punct, End };

struct Token {
  T kind = T::End;
  std::string text;
  int line = 1;
  int col = 1;
  std::size_t offset = 0;
  std::size_t end = 0;
};

struct RawComment {
  Comment c;
  int end_col = 0;
};

constexpr std::array<std::string_view, 21> kPunct = {
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=",
    "+",  "-",  "*",  "/",  "%",  "=",  "<",  ">",
};
constexpr std::string_view kSingles = "!?:;,.(){}[]@&|^~";

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string clean_block_comment(std::string_view body) {
  std::string out;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto nl = body.find('\n', start);
    std::string_view line = body.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    std::string t = trim(line);
    while (!t.empty() && t.front() == '*') t = trim(std::string_view(t).substr(1));
    if (!t.empty()) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run(std::vector<RawComment>& comments) {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= s_.size()) break;
      char c = s_[i_];
      if (c == '/' && peek(1) == '/') {
        RawComment rc;
        rc.c.span = {line_, line_, col()};
        std::size_t start = i_ + 2;
        while (i_ < s_.size() && s_[i_] != '\n') advance();
        rc.c.text = trim(s_.substr(start, i_ - start));
        rc.end_col = col();
        comments.push_back(std::move(rc));
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        RawComment rc;
        rc.c.span = {line_, line_, col()};
        int l0 = line_, c0 = col();
        advance();
        advance();
        std::size_t start = i_;
        while (i_ < s_.size() && !(s_[i_] == '*' && peek(1) == '/')) advance();
        if (i_ >= s_.size()) throw SyntaxError(l0, c0, "'*/'", "end of input");
        rc.c.text = clean_block_comment(s_.substr(start, i_ - start));
        advance();
        advance();
        rc.c.span.end_line = line_;
        rc.end_col = col();
        comments.push_back(std::move(rc));
        continue;
      }
      Token t;
      t.line = line_;
      t.col = col();
      t.offset = i_;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '$'))
          advance();
        t.kind = T::Ident;
        t.text = std::string(s_.substr(t.offset, i_ - t.offset));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        t.kind = T::Number;
        t.text = number();
      } else if (c == '"' || c == '\'') {
        t.kind = T::String;
        t.text = quoted(c);
      } else {
        t.kind = T::Punct;
        for (auto p : kPunct) {
          if (s_.substr(i_, p.size()) == p) {
            t.text = std::string(p);
            break;
          }
        }
        if (t.text.empty()) {
          if (kSingles.find(c) == std::string_view::npos)
            throw SyntaxError(line_, col(), "a token", "'" + std::string(1, c) + "'");
          t.text = std::string(1, c);
        }
        for (std::size_t k = 0; k < t.text.size(); ++k) advance();
      }
      t.end = i_;
      out.push_back(std::move(t));
    }
    Token end;
    end.line = line_;
    end.col = col();
    end.offset = end.end = s_.size();
    out.push_back(end);
    return out;
  }

private:
  char peek(std::size_t k) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }
  int col() const { return static_cast<int>(i_ - line_start_) + 1; }
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      line_start_ = i_ + 1;
    }
    ++i_;
  }
  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance();
  }
  bool digit() const { return i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])); }

  std::string number() {
    std::size_t start = i_;
    while (digit() || (i_ < s_.size() && s_[i_] == '_')) advance();
    if (i_ < s_.size() && s_[i_] == '.' && !std::isalpha(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (digit()) advance();
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      advance();
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) advance();
      if (!digit()) throw SyntaxError(line_, col(), "exponent digits", "'" + std::string(1, peek(0)) + "'");
      while (digit()) advance();
    }
    std::string lex(s_.substr(start, i_ - start));
    lex.erase(std::remove(lex.begin(), lex.end(), '_'), lex.end());
    if (i_ < s_.size() && std::string_view("dDfFlL").find(s_[i_]) != std::string_view::npos) {
      if (s_[i_] == 'd' || s_[i_] == 'D' || s_[i_] == 'f' || s_[i_] == 'F') {
        if (lex.find_first_of(".eE") == std::string::npos) lex += ".0";
      }
      advance();
    }
    return lex;
  }

  std::string quoted(char q) {
    int l0 = line_, c0 = col();
    advance();
    std::string out;
    while (i_ < s_.size() && s_[i_] != q) {
      if (s_[i_] == '\n') break;
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
        advance();
        char e = s_[i_];
        out += e == 'n' ? '\n' : e == 't' ? '\t' : e == 'r' ? '\r' : e;
      } else {
        out += s_[i_];
      }
      advance();
    }
    if (i_ >= s_.size() || s_[i_] != q)
      throw SyntaxError(l0, c0, std::string("closing ") + q, "end of line");
    advance();
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  std::size_t line_start_ = 0;
};

constexpr std::array<std::string_view, 13> kModifiers = {
    "public", "private",  "protected", "static",   "final",    "abstract", "synchronized",
    "native", "transient", "volatile", "strictfp", "default",  "sealed",
};
constexpr std::array<std::string_view, 7> kAssignOps = {"=", "+=", "-=", "*=", "/=", "%=", "&="};
constexpr std::array<std::string_view, 8> kCastTypes = {"double", "float", "int", "long", "short", "byte", "char",
                                                        "boolean"};
constexpr std::array<std::string_view, 12> kReservedStmt = {"if",   "else", "while", "for",  "return", "break",
                                                            "continue", "new", "class", "true", "false", "this"};

struct Candidate {
  int id;
  int line;
  int col;
  bool decl;
};

class Parser {
public:
  Parser(std::string_view text, std::vector<Token> toks) : text_(text), t_(std::move(toks)) {}

  CompilationUnit unit() {
    CompilationUnit u;
    if (is("package")) {
      ++i_;
      u.package = dotted();
      expect(";");
    }
    while (is("import")) {
      ++i_;
      std::string name = dotted();
      if (is(".")) {
        ++i_;
        expect("*");
        name += ".*";
      }
      u.imports.push_back(name);
      expect(";");
    }
    while (!at_end()) {
      if (is(";")) {
        ++i_;
        continue;
      }
      class_decl(u.classes);
    }
    return u;
  }

  MethodDecl lone_method() {
    std::size_t start = t_[i_].offset;
    int begin_line = t_[i_].line, begin_col = t_[i_].col;
    skip_modifiers();
    MethodDecl m = member_method("", start, begin_line, begin_col);
    if (!at_end()) fail("end of method");
    return m;
  }

  const std::vector<Candidate>& candidates() const { return cands_; }

private:
  const Token& cur() const { return t_[i_]; }
  const Token& ahead(std::size_t k) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  bool at_end() const { return cur().kind == T::End; }
  bool is(std::string_view s) const { return cur().kind != T::String && cur().text == s; }
  bool ahead_is(std::size_t k, std::string_view s) const {
    const Token& t = ahead(k);
    return t.kind != T::String && t.text == s;
  }
  bool ident() const {
    return cur().kind == T::Ident &&
           std::find(kReservedStmt.begin(), kReservedStmt.end(), cur().text) == kReservedStmt.end();
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = at_end() ? "end of input" : "'" + cur().text + "'";
    throw SyntaxError(cur().line, cur().col, expected, found);
  }

  void expect(std::string_view s) {
    if (!is(s)) fail("'" + std::string(s) + "'");
    ++i_;
  }

  std::string name() {
    if (!ident()) fail("identifier");
    return t_[i_++].text;
  }

  std::string dotted() {
    std::string out = name();
    while (is(".") && ahead(1).kind == T::Ident && !ahead_is(1, "class")) {
      ++i_;
      out += "." + name();
    }
    return out;
  }

  int last_line() const { return i_ > 0 ? t_[i_ - 1].line : 1; }
  int next_id() { return ++ids_; }

  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 0;
    do {
      if (at_end()) fail("'" + std::string(close) + "'");
      if (is(open)) ++depth;
      if (is(close)) --depth;
      ++i_;
    } while (depth > 0);
  }

  void skip_modifiers() {
    while (true) {
      if (is("@") && ahead(1).kind == T::Ident && !ahead_is(1, "interface")) {
        i_ += 2;
        while (is(".")) i_ += 2;
        if (is("(")) skip_balanced("(", ")");
      } else if (cur().kind == T::Ident &&
                 std::find(kModifiers.begin(), kModifiers.end(), cur().text) != kModifiers.end()) {
        ++i_;
      } else {
        return;
      }
    }
  }

  // Type := dotted ['<' args '>'] ('[' ']')*; returns false without consuming
  // anything when the tokens do not form a type.
  bool try_type(std::string& out) {
    std::size_t save = i_;
    if (!ident()) return false;
    out = dotted();
    if (is("<")) {
      int depth = 0;
      std::size_t j = i_;
      do {
        if (t_[j].kind == T::End) {
          i_ = save;
          return false;
        }
        if (t_[j].text == "<") ++depth;
        else if (t_[j].text == ">") --depth;
        else if (t_[j].kind != T::Ident && t_[j].text != "," && t_[j].text != "." && t_[j].text != "?" &&
                 t_[j].text != "[" && t_[j].text != "]") {
          i_ = save;
          return false;
        }
        out += t_[j].text;
        ++j;
      } while (depth > 0);
      i_ = j;
    }
    while (is("[") && ahead_is(1, "]")) {
      i_ += 2;
      out += "[]";
    }
    return true;
  }

  std::string type() {
    std::string out;
    if (!try_type(out)) fail("type");
    return out;
  }

  void class_decl(std::vector<ClassDecl>& classes) {
    skip_modifiers();
    if (!is("class")) fail("'class'");
    ClassDecl c;
    c.id = next_id();
    c.span = {cur().line, 0, cur().col};
    cands_.push_back({c.id, cur().line, cur().col, true});
    ++i_;
    c.name = name();
    if (is("<")) skip_balanced("<", ">");
    if (is("extends")) {
      ++i_;
      type();
    }
    if (is("implements")) {
      ++i_;
      type();
      while (is(",")) {
        ++i_;
        type();
      }
    }
    expect("{");
    while (!is("}")) {
      if (at_end()) fail("'}'");
      if (is(";")) {
        ++i_;
        continue;
      }
      std::size_t start = cur().offset;
      int line = cur().line, col = cur().col;
      skip_modifiers();
      if (is("class")) {
        // nested classes become siblings; walk back to include modifiers
        std::vector<ClassDecl> nested;
        class_decl(nested);
        for (auto& n : nested) pending_.push_back(std::move(n));
        continue;
      }
      if (is("{")) {  // initializer block
        skip_balanced("{", "}");
        continue;
      }
      if (cur().kind == T::Ident && cur().text == c.name && ahead_is(1, "(")) {
        c.methods.push_back(member_method(c.name, start, line, col));
        continue;
      }
      std::size_t save = i_;
      std::string ty = type();
      if (ident() && ahead_is(1, "(")) {
        i_ = save;
        c.methods.push_back(member_method(c.name, start, line, col));
        continue;
      }
      fields(c, ty, line, col);
    }
    c.span.end_line = cur().line;
    ++i_;
    classes.push_back(std::move(c));
    for (auto& n : pending_) classes.push_back(std::move(n));
    pending_.clear();
  }

  void fields(ClassDecl& c, const std::string& ty, int line, int col) {
    while (true) {
      FieldDecl f;
      f.id = next_id();
      cands_.push_back({f.id, line, col, true});
      f.type = ty;
      f.span = {line, line, col};
      f.name = name();
      while (is("[") && ahead_is(1, "]")) {
        i_ += 2;
        f.type += "[]";
      }
      if (is("=")) {
        ++i_;
        f.init = initializer();
      }
      f.span.end_line = last_line();
      c.fields.push_back(std::move(f));
      if (is(",")) {
        ++i_;
        continue;
      }
      expect(";");
      return;
    }
  }

  JExpr initializer() {
    if (is("{")) {  // array initializer: kept only as a placeholder
      JExpr e;
      e.kind = JExpr::Kind::New;
      e.text = "{}";
      e.span = {cur().line, cur().line, cur().col};
      skip_balanced("{", "}");
      return e;
    }
    return expr();
  }

  MethodDecl member_method(const std::string& class_name, std::size_t start, int line, int col) {
    MethodDecl m;
    m.id = next_id();
    m.begin_offset = start;
    m.span = {line, 0, col};
    cands_.push_back({m.id, line, col, true});
    if (cur().kind == T::Ident && ahead_is(1, "(") && (class_name.empty() || cur().text == class_name)) {
      m.is_constructor = true;
    } else {
      if (is("<")) skip_balanced("<", ">");
      m.return_type = type();
    }
    m.name = name();
    expect("(");
    while (!is(")")) {
      while (is("final") || is("@")) skip_modifiers();
      Param p;
      p.type = type();
      if (is(".") && ahead_is(1, ".") && ahead_is(2, ".")) i_ += 3;
      p.name = name();
      while (is("[") && ahead_is(1, "]")) {
        i_ += 2;
        p.type += "[]";
      }
      m.params.push_back(std::move(p));
      if (!is(")")) expect(",");
    }
    ++i_;
    if (is("throws")) {
      ++i_;
      type();
      while (is(",")) {
        ++i_;
        type();
      }
    }
    if (is(";")) {
      ++i_;
    } else {
      m.body = block();
    }
    m.span.end_line = last_line();
    m.end_offset = t_[i_ - 1].end;
    return m;
  }

  std::vector<JStmt> block() {
    expect("{");
    std::vector<JStmt> out;
    while (!is("}")) {
      if (at_end()) fail("'}'");
      statement(out);
    }
    ++i_;
    return out;
  }

  JStmt begin(JStmt::Kind k) {
    JStmt s;
    s.kind = k;
    s.id = next_id();
    s.span = {cur().line, cur().line, cur().col};
    cands_.push_back({s.id, cur().line, cur().col, k == JStmt::Kind::VarDecl});
    return s;
  }

  void finish(JStmt& s) { s.span.end_line = last_line(); }

  // A statement body that may be a single statement or a block.
  std::vector<JStmt> body() {
    std::vector<JStmt> out;
    if (is("{")) return block();
    statement(out);
    return out;
  }

  bool local_decl_ahead() {
    std::size_t save = i_;
    while (is("final")) ++i_;
    std::string ty;
    bool ok = try_type(ty) && ident() && (ahead_is(1, "=") || ahead_is(1, ";") || ahead_is(1, ",") ||
                                          ahead_is(1, "[") || ahead_is(1, ":"));
    i_ = save;
    return ok;
  }

  void local_decls(std::vector<JStmt>& out) {
    while (is("final")) ++i_;
    int line = cur().line, col = cur().col;
    std::string ty = type();
    bool first = true;
    while (true) {
      JStmt s;
      if (first) {
        s = begin(JStmt::Kind::VarDecl);
        s.span = {line, line, col};
        cands_.back().line = line;
        cands_.back().col = col;
      } else {
        s = begin(JStmt::Kind::VarDecl);
      }
      first = false;
      s.type = ty;
      s.target = name();
      while (is("[") && ahead_is(1, "]")) {
        i_ += 2;
        s.type += "[]";
      }
      if (is("=")) {
        ++i_;
        s.op = "=";
        s.expr = initializer();
      }
      finish(s);
      out.push_back(std::move(s));
      if (is(",")) {
        ++i_;
        continue;
      }
      return;
    }
  }

  void statement(std::vector<JStmt>& out) {
    using K = JStmt::Kind;
    if (is("{")) {
      JStmt s = begin(K::Block);
      s.body = block();
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    if (is(";")) {
      JStmt s = begin(K::Empty);
      ++i_;
      out.push_back(std::move(s));
      return;
    }
    if (is("if")) {
      JStmt s = begin(K::If);
      ++i_;
      expect("(");
      s.expr = expr();
      expect(")");
      s.body = body();
      if (is("else")) {
        ++i_;
        s.has_else = true;
        s.else_body = body();
      }
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    if (is("while")) {
      JStmt s = begin(K::While);
      ++i_;
      expect("(");
      s.expr = expr();
      expect(")");
      s.body = body();
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    if (is("for")) {
      JStmt s = begin(K::For);
      ++i_;
      expect("(");
      if (!is(";")) {
        if (local_decl_ahead()) {
          local_decls(s.init);
        } else {
          simple(s.init);
          while (is(",")) {
            ++i_;
            simple(s.init);
          }
        }
      }
      expect(";");
      if (!is(";")) s.expr = expr();
      expect(";");
      if (!is(")")) {
        simple(s.update);
        while (is(",")) {
          ++i_;
          simple(s.update);
        }
      }
      expect(")");
      s.body = body();
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    if (is("return")) {
      JStmt s = begin(K::Return);
      ++i_;
      if (!is(";")) s.expr = expr();
      expect(";");
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    if (is("break") || is("continue")) {
      JStmt s = begin(is("break") ? K::Break : K::Continue);
      ++i_;
      expect(";");
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    if (local_decl_ahead()) {
      local_decls(out);
      expect(";");
      return;
    }
    simple(out);
    expect(";");
  }

  // Assignment, increment or call, without the trailing ';'.
  void simple(std::vector<JStmt>& out) {
    using K = JStmt::Kind;
    if (is("++") || is("--")) {
      JStmt s = begin(K::Assign);
      s.op = is("++") ? "+=" : "-=";
      s.increment = true;
      ++i_;
      target(s);
      s.expr = one();
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    if (is("new")) {
      JStmt s = begin(K::Call);
      s.expr = primary();
      finish(s);
      out.push_back(std::move(s));
      return;
    }
    JStmt s = begin(K::Assign);
    std::size_t save = i_;
    int save_ids = ids_;
    auto save_cands = cands_.size();
    target(s);
    if (std::find(kAssignOps.begin(), kAssignOps.end(), cur().text) != kAssignOps.end() &&
        cur().kind == T::Punct) {
      s.op = cur().text;
      ++i_;
      s.expr = expr();
    } else if (is("++") || is("--")) {
      s.op = is("++") ? "+=" : "-=";
      s.increment = true;
      ++i_;
      s.expr = one();
    } else {
      i_ = save;
      ids_ = save_ids;
      cands_.resize(save_cands);
      s = begin(K::Call);
      JExpr call = primary();
      if (call.kind != JExpr::Kind::Call) fail("assignment or call");
      s.expr = std::move(call);
    }
    finish(s);
    out.push_back(std::move(s));
  }

  JExpr one() {
    JExpr e;
    e.kind = JExpr::Kind::Number;
    e.text = "1";
    e.integral = true;
    e.span = {last_line(), last_line(), 0};
    return e;
  }

  void target(JStmt& s) {
    if (is("this") && ahead_is(1, ".")) {
      i_ += 2;
      s.target_this = true;
    }
    s.target = dotted();
  }

  JExpr node(JExpr::Kind k, std::string text, const Token& at) {
    JExpr e;
    e.kind = k;
    e.text = std::move(text);
    e.span = {at.line, at.line, at.col};
    return e;
  }

  JExpr binary(JExpr lhs, const Token& op, JExpr rhs) {
    JExpr e = node(JExpr::Kind::Binary, op.text, op);
    e.span.begin_line = lhs.span.begin_line;
    e.span.column = lhs.span.column;
    e.span.end_line = rhs.span.end_line;
    e.args = {std::move(lhs), std::move(rhs)};
    return e;
  }

  JExpr expr() { return ternary(); }

  JExpr ternary() {
    JExpr c = level(0);
    if (!is("?")) return c;
    const Token& q = cur();
    ++i_;
    JExpr a = expr();
    expect(":");
    JExpr b = ternary();
    JExpr e = node(JExpr::Kind::Ternary, "?:", q);
    e.args = {std::move(c), std::move(a), std::move(b)};
    return e;
  }

  // Binary levels from loosest to tightest.
  JExpr level(int k) {
    static const std::vector<std::vector<std::string_view>> kLevels = {
        {"||"}, {"&&"}, {"==", "!="}, {"<", "<=", ">", ">="}, {"+", "-"}, {"*", "/", "%"},
    };
    if (k == static_cast<int>(kLevels.size())) return unary();
    JExpr lhs = level(k + 1);
    while (cur().kind == T::Punct &&
           std::find(kLevels[k].begin(), kLevels[k].end(), cur().text) != kLevels[k].end()) {
      const Token& op = cur();
      ++i_;
      lhs = binary(std::move(lhs), op, level(k + 1));
    }
    return lhs;
  }

  JExpr unary() {
    if (is("-") || is("+") || is("!")) {
      const Token& op = cur();
      ++i_;
      JExpr e = node(JExpr::Kind::Unary, op.text, op);
      e.args = {unary()};
      return e;
    }
    if (is("(") && ahead(1).kind == T::Ident && ahead_is(2, ")") &&
        std::find(kCastTypes.begin(), kCastTypes.end(), ahead(1).text) != kCastTypes.end()) {
      const Token& at = cur();
      JExpr e = node(JExpr::Kind::Cast, ahead(1).text, at);
      i_ += 3;
      e.args = {unary()};
      return e;
    }
    return primary();
  }

  JExpr primary() {
    const Token& t = cur();
    if (t.kind == T::Number) {
      ++i_;
      JExpr e = node(JExpr::Kind::Number, t.text, t);
      e.integral = t.text.find_first_of(".eE") == std::string::npos;
      return e;
    }
    if (t.kind == T::String) {
      ++i_;
      return node(JExpr::Kind::String, t.text, t);
    }
    if (is("true") || is("false")) {
      ++i_;
      return node(JExpr::Kind::Bool, t.text, t);
    }
    if (is("(")) {
      ++i_;
      JExpr e = expr();
      expect(")");
      e.parenthesized = true;
      return e;
    }
    if (is("new")) {
      ++i_;
      JExpr e = node(JExpr::Kind::New, type(), t);
      if (is("[")) {
        skip_balanced("[", "]");
        return e;
      }
      e.args = arguments();
      return e;
    }
    bool self = false;
    if (is("this") && ahead_is(1, ".")) {
      i_ += 2;
      self = true;
    }
    if (!ident()) fail("expression");
    std::string n = dotted();
    if (is("(")) {
      JExpr e = node(JExpr::Kind::Call, n, t);
      e.qualified_this = self;
      e.args = arguments();
      e.span.end_line = last_line();
      return e;
    }
    JExpr e = node(JExpr::Kind::Name, n, t);
    e.qualified_this = self;
    return e;
  }

  std::vector<JExpr> arguments() {
    expect("(");
    std::vector<JExpr> out;
    while (!is(")")) {
      out.push_back(expr());
      if (!is(")")) expect(",");
    }
    ++i_;
    return out;
  }

  std::string_view text_;
  std::vector<Token> t_;
  std::size_t i_ = 0;
  int ids_ = 0;
  std::vector<Candidate> cands_;
  std::vector<ClassDecl> pending_;
};

void attach(std::vector<RawComment>& raw, const std::vector<Candidate>& cands) {
  for (auto& rc : raw) {
    const Candidate* best = nullptr;
    auto rank = [&](const Candidate& c) {
      int distance = c.line - rc.c.span.end_line;  // 0 same line, 1 next line
      return std::tuple(distance, c.decl ? 0 : 1, c.col);
    };
    for (const auto& c : cands) {
      bool same = c.line == rc.c.span.end_line && c.col >= rc.end_col;
      bool next = c.line == rc.c.span.end_line + 1;
      if (!same && !next) continue;
      if (!best || rank(c) < rank(*best)) best = &c;
    }
    rc.c.attached_to = best ? best->id : 0;
  }
}

}  // namespace

CompilationUnit parse_source(const SourceUnit& unit) {
  if (unit.text.empty()) throw SyntaxError(1, 1, "a compilation unit", "empty input");
  std::vector<RawComment> raw;
  auto toks = Lexer(unit.text).run(raw);
  Parser p(unit.text, std::move(toks));
  CompilationUnit cu = p.unit();
  attach(raw, p.candidates());
  for (auto& rc : raw) cu.comments.push_back(std::move(rc.c));
  cu.path = unit.path;
  cu.text = unit.text;
  return cu;
}

MethodDecl parse_method(std::string_view text) {
  std::vector<RawComment> raw;
  auto toks = Lexer(text).run(raw);
  Parser p(text, std::move(toks));
  return p.lone_method();
}

}  // namespace modelforge::codex
