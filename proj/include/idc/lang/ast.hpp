#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "idc/core/value.hpp"

namespace idc::lang {

enum class ExprKind {
  literal,
  var,
  field_access,
  let,
  if_,
  binop,
  lambda,
  apply,
  builtin_call,
};

enum class BinOp { add, sub, mul, div, concat, eq, ne, lt, le, gt, ge, logical_and, logical_or };

std::string_view binop_token(BinOp op);

// Pure expression tree. Child layout by kind:
//   field_access: [base]            name = key
//   let:          [bound, body]     name = identifier
//   if_:          [cond, then, else]
//   binop:        [lhs, rhs]        op
//   lambda:       [body]            name = parameter
//   apply:        [fn, arg]
//   builtin_call: args              name = builtin
struct Expr {
  ExprKind kind = ExprKind::literal;
  Value literal;
  std::string name;
  BinOp op = BinOp::add;
  std::vector<Expr> children;

  bool operator==(const Expr& other) const = default;
};

Expr make_literal(Value v);
Expr make_var(std::string name);
Expr make_field_access(Expr base, std::string key);
Expr make_let(std::string name, Expr bound, Expr body);
Expr make_if(Expr cond, Expr then_branch, Expr else_branch);
Expr make_binop(BinOp op, Expr lhs, Expr rhs);
Expr make_lambda(std::string param, Expr body);
Expr make_apply(Expr fn, Expr arg);
Expr make_builtin_call(std::string name, std::vector<Expr> args);

// Pure-layer builtins; fixed arity, checked at parse time.
struct BuiltinSpec {
  std::string_view name;
  std::size_t arity;
};
inline constexpr BuiltinSpec kBuiltins[] = {
    {"len", 1}, {"get", 2}, {"put", 3}, {"push", 2}, {"has", 2}, {"keys", 1}, {"str", 1},
};
const BuiltinSpec* find_builtin(std::string_view name);

// Surface-grammar keywords; reserved words additionally include builtins.
bool is_keyword(std::string_view word);
bool is_reserved_word(std::string_view word);
bool is_identifier(std::string_view word);

struct ComputeStep {
  std::string name;
  std::string binding;  // always equals name in the surface grammar
  Expr expr;

  bool operator==(const ComputeStep& other) const = default;
};

struct AskStep {
  std::string name;
  std::string binding;
  std::string machine;  // effect machine id, e.g. "@stdlib/email/send"
  std::vector<std::pair<std::string, Expr>> input_fields;

  bool operator==(const AskStep& other) const = default;
};

// The only effectful construct in the language is AskStep; the variant
// arity is pinned by a static_assert in the tests.
using Step = std::variant<ComputeStep, AskStep>;

const std::string& step_name(const Step& s);

struct ProgramAst {
  std::string name;
  std::vector<std::string> capabilities;  // action-path prefixes
  std::vector<Step> steps;

  bool operator==(const ProgramAst& other) const = default;
};

enum class ParseErrorKind { indentation, syntax, duplicate_name, unbound_identifier };

std::string_view parse_error_kind_name(ParseErrorKind k);

struct ParseError {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::string message;
  ParseErrorKind kind = ParseErrorKind::syntax;

  std::string to_string() const;
};

struct ParseResult {
  std::optional<ProgramAst> ast;
  std::optional<ParseError> error;

  bool ok() const { return ast.has_value(); }
};

}  // namespace idc::lang
