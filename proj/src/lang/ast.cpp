#include "idc/lang/ast.hpp"

namespace idc::lang {

std::string_view binop_token(BinOp op) {
  switch (op) {
    case BinOp::add:
      return "+";
    case BinOp::sub:
      return "-";
    case BinOp::mul:
      return "*";
    case BinOp::div:
      return "/";
    case BinOp::concat:
      return "++";
    case BinOp::eq:
      return "==";
    case BinOp::ne:
      return "!=";
    case BinOp::lt:
      return "<";
    case BinOp::le:
      return "<=";
    case BinOp::gt:
      return ">";
    case BinOp::ge:
      return ">=";
    case BinOp::logical_and:
      return "and";
    case BinOp::logical_or:
      return "or";
  }
  return "+";
}

Expr make_literal(Value v) {
  Expr e;
  e.kind = ExprKind::literal;
  e.literal = std::move(v);
  return e;
}

Expr make_var(std::string name) {
  Expr e;
  e.kind = ExprKind::var;
  e.name = std::move(name);
  return e;
}

Expr make_field_access(Expr base, std::string key) {
  Expr e;
  e.kind = ExprKind::field_access;
  e.name = std::move(key);
  e.children.push_back(std::move(base));
  return e;
}

Expr make_let(std::string name, Expr bound, Expr body) {
  Expr e;
  e.kind = ExprKind::let;
  e.name = std::move(name);
  e.children.push_back(std::move(bound));
  e.children.push_back(std::move(body));
  return e;
}

Expr make_if(Expr cond, Expr then_branch, Expr else_branch) {
  Expr e;
  e.kind = ExprKind::if_;
  e.children.push_back(std::move(cond));
  e.children.push_back(std::move(then_branch));
  e.children.push_back(std::move(else_branch));
  return e;
}

Expr make_binop(BinOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::binop;
  e.op = op;
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  return e;
}

Expr make_lambda(std::string param, Expr body) {
  Expr e;
  e.kind = ExprKind::lambda;
  e.name = std::move(param);
  e.children.push_back(std::move(body));
  return e;
}

Expr make_apply(Expr fn, Expr arg) {
  Expr e;
  e.kind = ExprKind::apply;
  e.children.push_back(std::move(fn));
  e.children.push_back(std::move(arg));
  return e;
}

Expr make_builtin_call(std::string name, std::vector<Expr> args) {
  Expr e;
  e.kind = ExprKind::builtin_call;
  e.name = std::move(name);
  e.children = std::move(args);
  return e;
}

const BuiltinSpec* find_builtin(std::string_view name) {
  for (const BuiltinSpec& b : kBuiltins)
    if (b.name == name) return &b;
  return nullptr;
}

bool is_keyword(std::string_view word) {
  static constexpr std::string_view kw[] = {
      "program", "capabilities", "step", "compute", "ask",   "machine", "input", "let",  "in",
      "if",      "then",         "else", "fn",      "true",  "false",   "null",  "and",  "or",
  };
  for (std::string_view k : kw)
    if (k == word) return true;
  return false;
}

bool is_reserved_word(std::string_view word) {
  return is_keyword(word) || find_builtin(word) != nullptr;
}

bool is_identifier(std::string_view word) {
  if (word.empty()) return false;
  auto start = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto cont = [&](char c) { return start(c) || (c >= '0' && c <= '9'); };
  if (!start(word[0])) return false;
  for (char c : word.substr(1))
    if (!cont(c)) return false;
  return true;
}

const std::string& step_name(const Step& s) {
  return std::visit([](const auto& step) -> const std::string& { return step.name; }, s);
}

std::string_view parse_error_kind_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::indentation:
      return "indentation";
    case ParseErrorKind::syntax:
      return "syntax";
    case ParseErrorKind::duplicate_name:
      return "duplicate-name";
    case ParseErrorKind::unbound_identifier:
      return "unbound-identifier";
  }
  return "syntax";
}

std::string ParseError::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " +
         std::string(parse_error_kind_name(kind)) + ": " + message;
}

}  // namespace idc::lang
