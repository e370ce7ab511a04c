#include "modelforge/eqc/equation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace modelforge::eqc {

using Code = EquationError::Code;

EquationError::EquationError(Code code, std::size_t position, std::string token, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + " at " + std::to_string(position) + ": " + message),
      code_(code),
      position_(position),
      token_(std::move(token)) {}

std::string_view error_code_name(Code code) {
  switch (code) {
    case Code::NoEquals: return "NoEquals";
    case Code::MultipleEquals: return "MultipleEquals";
    case Code::EmptySide: return "EmptySide";
    case Code::UnbalancedBrackets: return "UnbalancedBrackets";
    case Code::UnknownToken: return "UnknownToken";
    case Code::UnexpectedToken: return "UnexpectedToken";
    case Code::NoLhsVariable: return "NoLhsVariable";
    case Code::UnsolvableLhs: return "UnsolvableLhs";
    case Code::SelfReference: return "SelfReference";
  }
  return "?";
}

void validate(const FunctionDef& fn) {
  std::set<std::string, std::less<>> seen;
  for (const auto& in : fn.inputs) {
    if (!seen.insert(in).second) throw std::invalid_argument("duplicate input " + in);
  }
  if (seen.count(fn.output)) throw std::invalid_argument("output " + fn.output + " is also an input");
  for (const auto& v : free_variables(fn.body)) {
    if (!seen.count(v)) throw std::invalid_argument("free variable " + v + " is not an input");
  }
}

std::string function_name(const EquationSource& src, std::string_view output) {
  std::string raw = src.doc_id + "_L" + std::to_string(src.line) + "_" + std::string(output);
  std::string out;
  for (unsigned char c : raw) out += (std::isalnum(c) || c == '_') ? char(c) : '_';
  if (!out.empty() && std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), '_');
  return out;
}

namespace {

enum class Tok { Number, Ident, Func, ExpBase, Op, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t pos = 0;  // offset in the original equation
  double value = 0.0;
};

bool is_greek_lead(unsigned char c) { return c == 0xCE || c == 0xCF; }
bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }

std::size_t utf8_length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xE) return 3;
  if ((c >> 3) == 0x1E) return 4;
  return 1;
}

class Scanner {
public:
  Scanner(std::string_view text, std::size_t base) : s_(text), base_(base) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s_.size()) {
      unsigned char c = s_[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
        continue;
      }
      if (std::isdigit(c) || (c == '.' && i + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i + 1])))) {
        out.push_back(number(i));
        continue;
      }
      if (is_ident_start(c) || is_greek_lead(c)) {
        out.push_back(word(i));
        continue;
      }
      Token t;
      t.pos = base_ + i;
      t.text = std::string(1, char(c));
      switch (c) {
        case '+':
        case '-':
        case '*':
        case '/':
        case '^': t.kind = Tok::Op; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        default: {
          std::string bad(s_.substr(i, std::min(utf8_length(c), s_.size() - i)));
          throw EquationError(Code::UnknownToken, base_ + i, bad, "unrecognized character '" + bad + "'");
        }
      }
      out.push_back(std::move(t));
      ++i;
    }
    Token end;
    end.pos = base_ + s_.size();
    out.push_back(end);
    return out;
  }

private:
  Token number(std::size_t& i) {
    std::size_t start = i;
    while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
    if (i < s_.size() && s_[i] == '.') {
      ++i;
      while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
    }
    Token t;
    t.kind = Tok::Number;
    t.pos = base_ + start;
    t.text = std::string(s_.substr(start, i - start));
    std::string lexeme = t.text;
    if (lexeme.front() == '.') lexeme.insert(lexeme.begin(), '0');
    if (lexeme.back() == '.') lexeme.pop_back();
    std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), t.value);
    return t;
  }

  Token word(std::size_t& i) {
    std::size_t start = i;
    while (i < s_.size()) {
      unsigned char c = s_[i];
      if (std::isalnum(c) || c == '_') {
        ++i;
      } else if (is_greek_lead(c) && i + 1 < s_.size()) {
        i += 2;
      } else {
        break;
      }
    }
    Token t;
    t.pos = base_ + start;
    t.text = std::string(s_.substr(start, i - start));
    std::size_t j = i;
    while (j < s_.size() && (s_[j] == ' ' || s_[j] == '\t')) ++j;
    char next = j < s_.size() ? s_[j] : '\0';
    if (func_from_name(t.text)) {
      if (next != '(')
        throw EquationError(Code::UnexpectedToken, t.pos, t.text, "expected '(' after " + t.text);
      t.kind = Tok::Func;
    } else if (t.text == "e" && next == '^') {
      t.kind = Tok::ExpBase;
    } else if (next == '(') {
      throw EquationError(Code::UnknownToken, t.pos, t.text, "unknown function " + t.text);
    } else {
      t.kind = Tok::Ident;
    }
    return t;
  }

  std::string_view s_;
  std::size_t base_;
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Expr parse() {
    Expr e = sum();
    if (peek().kind != Tok::End) {
      const Token& bad = peek();
      std::string prev = i_ > 0 ? t_[i_ - 1].text : "";
      throw EquationError(Code::UnexpectedToken, bad.pos, bad.text,
                          "missing operator between '" + prev + "' and '" + bad.text + "'");
    }
    return e;
  }

private:
  const Token& peek() const { return t_[i_]; }
  bool at_op(char c) const { return peek().kind == Tok::Op && peek().text[0] == c; }

  [[noreturn]] void unexpected(const std::string& what) const {
    const Token& t = peek();
    std::string shown = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw EquationError(Code::UnexpectedToken, t.pos, t.text, "expected " + what + ", found " + shown);
  }

  Expr sum() {
    Expr e = product();
    while (at_op('+') || at_op('-')) {
      BinOp op = peek().text[0] == '+' ? BinOp::Add : BinOp::Sub;
      ++i_;
      e = Expr::bin(op, e, product());
    }
    return e;
  }

  Expr product() {
    Expr e = unary();
    while (at_op('*') || at_op('/')) {
      BinOp op = peek().text[0] == '*' ? BinOp::Mul : BinOp::Div;
      ++i_;
      e = Expr::bin(op, e, unary());
    }
    return e;
  }

  Expr unary() {
    if (at_op('-')) {
      ++i_;
      return Expr::neg(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (at_op('^')) {
      ++i_;
      return Expr::bin(BinOp::Pow, base, exponent());
    }
    return base;
  }

  Expr exponent() {
    if (at_op('-')) {
      ++i_;
      return Expr::neg(exponent());
    }
    return power();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: ++i_; return Expr::num(t.value);
      case Tok::Ident: ++i_; return Expr::var(t.text);
      case Tok::Func: {
        Func f = *func_from_name(t.text);
        ++i_;
        return Expr::call(f, group());
      }
      case Tok::ExpBase:
        ++i_;
        if (!at_op('^')) unexpected("'^'");
        ++i_;
        return Expr::call(Func::Exp, exponent());
      case Tok::LParen: return group();
      default: unexpected("an operand");
    }
  }

  Expr group() {
    if (peek().kind != Tok::LParen) unexpected("'('");
    ++i_;
    Expr e = sum();
    if (peek().kind != Tok::RParen) unexpected("')'");
    ++i_;
    return e;
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Rewrites []{} to () in place after checking the side is balanced.
void normalize_brackets(std::string& side, std::size_t base) {
  std::vector<std::pair<char, std::size_t>> stack;
  for (std::size_t i = 0; i < side.size(); ++i) {
    char c = side[i];
    if (c == '(' || c == '[' || c == '{') {
      stack.emplace_back(c, i);
      side[i] = '(';
    } else if (c == ')' || c == ']' || c == '}') {
      char want = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (stack.empty() || stack.back().first != want)
        throw EquationError(Code::UnbalancedBrackets, base + i, std::string(1, c), "unmatched closing bracket");
      stack.pop_back();
      side[i] = ')';
    }
  }
  if (!stack.empty()) {
    auto [c, at] = stack.back();
    throw EquationError(Code::UnbalancedBrackets, base + at, std::string(1, c), "unclosed bracket");
  }
}

Expr parse_side(std::string_view raw, std::size_t base) {
  std::string side(raw);
  if (std::all_of(side.begin(), side.end(), is_space))
    throw EquationError(Code::EmptySide, base, "", "empty side");
  normalize_brackets(side, base);
  return Parser(Scanner(side, base).run()).parse();
}

}  // namespace

Expr parse_expression(std::string_view text) {
  if (auto eq = text.find('='); eq != std::string_view::npos)
    throw EquationError(Code::UnexpectedToken, eq, "=", "'=' in expression");
  return parse_side(text, 0);
}

CompiledEquation parse_equation(std::string_view raw, const EquationSource* src) {
  auto first = raw.find('=');
  if (first == std::string_view::npos) throw EquationError(Code::NoEquals, 0, "", "no '=' in equation");
  if (auto second = raw.find('=', first + 1); second != std::string_view::npos)
    throw EquationError(Code::MultipleEquals, second, "=", "more than one '='");

  CompiledEquation out;
  out.original = std::string(raw);
  out.lhs = parse_side(raw.substr(0, first), 0);
  out.rhs = parse_side(raw.substr(first + 1), first + 1);
  out.interpretations = rearrange(out.lhs, out.rhs, src);
  return out;
}

std::vector<FunctionDef> rearrange(const Expr& lhs, const Expr& rhs, const EquationSource* src) {
  auto vars = free_variables(lhs);
  if (vars.empty()) throw EquationError(Code::NoLhsVariable, 0, "", "left side has no variable");

  auto make = [&](const std::string& output, Expr body) {
    FunctionDef fn;
    fn.name = src ? function_name(*src, output) : output;
    fn.output = output;
    fn.inputs = free_variables(body);
    fn.body = std::move(body);
    return fn;
  };
  auto check_self = [&](const std::string& v) {
    if (mentions(rhs, v)) throw EquationError(Code::SelfReference, 0, v, v + " appears on both sides");
  };

  if (lhs.is_var()) {
    check_self(lhs.name());
    return {make(lhs.name(), rhs)};
  }

  bool two_vars = lhs.kind() == ExprKind::Bin && lhs.lhs().is_var() && lhs.rhs().is_var() &&
                  lhs.lhs().name() != lhs.rhs().name();
  if (!two_vars || lhs.op() == BinOp::Pow)
    throw EquationError(Code::UnsolvableLhs, 0, to_infix(lhs), "cannot solve left side " + to_infix(lhs));

  const std::string& x = lhs.lhs().name();
  const std::string& y = lhs.rhs().name();
  check_self(x);
  check_self(y);
  Expr X = lhs.lhs(), Y = lhs.rhs();
  switch (lhs.op()) {
    case BinOp::Add: return {make(x, Expr::bin(BinOp::Sub, rhs, Y)), make(y, Expr::bin(BinOp::Sub, rhs, X))};
    case BinOp::Sub: return {make(x, Expr::bin(BinOp::Add, rhs, Y)), make(y, Expr::bin(BinOp::Sub, X, rhs))};
    case BinOp::Mul: return {make(x, Expr::bin(BinOp::Div, rhs, Y)), make(y, Expr::bin(BinOp::Div, rhs, X))};
    case BinOp::Div: return {make(x, Expr::bin(BinOp::Mul, rhs, Y)), make(y, Expr::bin(BinOp::Div, X, rhs))};
    default: throw EquationError(Code::UnsolvableLhs, 0, to_infix(lhs), "cannot solve left side " + to_infix(lhs));
  }
}

}  // namespace modelforge::eqc
