#include <stdexcept>

#include "idc/lang/parse.hpp"

namespace idc::lang {

namespace {

bool bare_key_ok(std::string_view key) {
  return is_identifier(key) && !is_keyword(key);
}

void append_string_literal(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20)
          throw std::invalid_argument("string is not representable in surface syntax");
        out += c;
    }
  }
  out += '"';
}

void append_value_literal(std::string& out, const Value& v) {
  switch (v.kind()) {
    case ValueKind::unit:
      out += "null";
      break;
    case ValueKind::boolean:
      out += v.as_boolean() ? "true" : "false";
      break;
    case ValueKind::integer:
      out += std::to_string(v.as_integer());
      break;
    case ValueKind::string:
      append_string_literal(out, v.as_string());
      break;
    case ValueKind::list: {
      out += '[';
      bool first = true;
      for (const Value& e : v.as_list()) {
        if (!first) out += ", ";
        first = false;
        append_value_literal(out, e);
      }
      out += ']';
      break;
    }
    case ValueKind::map: {
      out += '{';
      bool first = true;
      for (const auto& [key, val] : v.as_map()) {
        if (!first) out += ", ";
        first = false;
        if (bare_key_ok(key))
          out += key;
        else
          append_string_literal(out, key);
        out += ": ";
        append_value_literal(out, val);
      }
      out += '}';
      break;
    }
  }
}

// Precedence: let/if/fn 0, or 1, and 2, cmp 3, concat 4, add 5, mul 6,
// postfix 7, atoms 8.
int binop_level(BinOp op) {
  switch (op) {
    case BinOp::logical_or:
      return 1;
    case BinOp::logical_and:
      return 2;
    case BinOp::eq:
    case BinOp::ne:
    case BinOp::lt:
    case BinOp::le:
    case BinOp::gt:
    case BinOp::ge:
      return 3;
    case BinOp::concat:
      return 4;
    case BinOp::add:
    case BinOp::sub:
      return 5;
    case BinOp::mul:
    case BinOp::div:
      return 6;
  }
  return 5;
}

int expr_level(const Expr& e) {
  switch (e.kind) {
    case ExprKind::let:
    case ExprKind::if_:
    case ExprKind::lambda:
      return 0;
    case ExprKind::binop:
      return binop_level(e.op);
    case ExprKind::field_access:
    case ExprKind::apply:
    case ExprKind::builtin_call:
      return 7;
    case ExprKind::literal:
    case ExprKind::var:
      return 8;
  }
  return 8;
}

void append_expr(std::string& out, const Expr& e, int min_level) {
  const bool parens = expr_level(e) < min_level;
  if (parens) out += '(';
  switch (e.kind) {
    case ExprKind::literal:
      append_value_literal(out, e.literal);
      break;
    case ExprKind::var:
      out += e.name;
      break;
    case ExprKind::field_access:
      append_expr(out, e.children[0], 7);
      out += '.';
      out += e.name;
      break;
    case ExprKind::let:
      out += "let ";
      out += e.name;
      out += " = ";
      append_expr(out, e.children[0], 0);
      out += " in ";
      append_expr(out, e.children[1], 0);
      break;
    case ExprKind::if_:
      out += "if ";
      append_expr(out, e.children[0], 0);
      out += " then ";
      append_expr(out, e.children[1], 0);
      out += " else ";
      append_expr(out, e.children[2], 0);
      break;
    case ExprKind::binop: {
      const int level = binop_level(e.op);
      // comparisons do not chain, so both operands need the tighter
      // level; the other operators are left-associative
      const bool cmp = level == 3;
      append_expr(out, e.children[0], cmp ? level + 1 : level);
      out += ' ';
      out += binop_token(e.op);
      out += ' ';
      append_expr(out, e.children[1], level + 1);
      break;
    }
    case ExprKind::lambda:
      out += "fn ";
      out += e.name;
      out += " -> ";
      append_expr(out, e.children[0], 0);
      break;
    case ExprKind::apply:
      append_expr(out, e.children[0], 7);
      out += '(';
      append_expr(out, e.children[1], 0);
      out += ')';
      break;
    case ExprKind::builtin_call: {
      out += e.name;
      out += '(';
      bool first = true;
      for (const Expr& arg : e.children) {
        if (!first) out += ", ";
        first = false;
        append_expr(out, arg, 0);
      }
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string unparse_expr(const Expr& expr) {
  std::string out;
  append_expr(out, expr, 0);
  return out;
}

std::string unparse(const ProgramAst& ast) {
  std::string out = "program " + ast.name + "\n";
  if (!ast.capabilities.empty()) {
    out += "  capabilities:\n";
    for (const std::string& cap : ast.capabilities) {
      out += "    ";
      out += cap;
      out += '\n';
    }
  }
  for (const Step& step : ast.steps) {
    if (const auto* compute = std::get_if<ComputeStep>(&step)) {
      out += "  step " + compute->name + ": compute ";
      append_expr(out, compute->expr, 0);
      out += '\n';
    } else {
      const auto& ask = std::get<AskStep>(step);
      out += "  step " + ask.name + ": ask {\n";
      out += "    machine ";
      append_string_literal(out, ask.machine);
      out += '\n';
      out += "    input {\n";
      for (const auto& [key, expr] : ask.input_fields) {
        out += "      " + key + ": ";
        append_expr(out, expr, 0);
        out += '\n';
      }
      out += "    }\n";
      out += "  }\n";
    }
  }
  return out;
}

}  // namespace idc::lang
