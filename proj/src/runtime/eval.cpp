#include "idc/runtime/eval.hpp"

#include <memory>

namespace idc::runtime {

namespace {

using lang::BinOp;
using lang::Expr;
using lang::ExprKind;

struct Closure;
using ClosurePtr = std::shared_ptr<const Closure>;

struct RtValue {
  Value data;
  ClosurePtr closure;  // when set, `data` is meaningless

  bool is_closure() const { return closure != nullptr; }
};

struct EnvNode;
using EnvPtr = std::shared_ptr<const EnvNode>;

struct EnvNode {
  std::string name;
  RtValue value;
  EnvPtr next;
};

struct Closure {
  std::string param;
  const Expr* body;
  EnvPtr env;
};

struct EvalState {
  const Value* base_env;
  std::uint64_t budget;
};

RtValue eval(const Expr& e, const EnvPtr& env, EvalState& st, std::uint32_t depth);

const Value& require_data(const RtValue& v, const char* what) {
  if (v.is_closure()) throw EvalError(std::string(what) + " must be data, found a function");
  return v.data;
}

std::int64_t require_int(const RtValue& v, const char* what) {
  const Value& d = require_data(v, what);
  if (!d.is_integer()) throw EvalError(std::string(what) + " must be an integer");
  return d.as_integer();
}

bool require_bool(const RtValue& v, const char* what) {
  const Value& d = require_data(v, what);
  if (!d.is_boolean()) throw EvalError(std::string(what) + " must be a boolean");
  return d.as_boolean();
}

std::int64_t checked(std::int64_t a, std::int64_t b, BinOp op) {
  std::int64_t r = 0;
  bool overflow = false;
  switch (op) {
    case BinOp::add:
      overflow = __builtin_add_overflow(a, b, &r);
      break;
    case BinOp::sub:
      overflow = __builtin_sub_overflow(a, b, &r);
      break;
    case BinOp::mul:
      overflow = __builtin_mul_overflow(a, b, &r);
      break;
    case BinOp::div:
      if (b == 0) throw EvalError("division by zero");
      if (a == INT64_MIN && b == -1) throw EvalError("integer overflow");
      r = a / b;
      break;
    default:
      throw EvalError("not an arithmetic operator");
  }
  if (overflow) throw EvalError("integer overflow");
  return r;
}

RtValue eval_binop(const Expr& e, const EnvPtr& env, EvalState& st, std::uint32_t depth) {
  // short-circuit forms first
  if (e.op == BinOp::logical_and || e.op == BinOp::logical_or) {
    const bool lhs = require_bool(eval(e.children[0], env, st, depth + 1), "operand of and/or");
    if (e.op == BinOp::logical_and && !lhs) return {Value::boolean(false), nullptr};
    if (e.op == BinOp::logical_or && lhs) return {Value::boolean(true), nullptr};
    const bool rhs = require_bool(eval(e.children[1], env, st, depth + 1), "operand of and/or");
    return {Value::boolean(rhs), nullptr};
  }

  const RtValue lhs = eval(e.children[0], env, st, depth + 1);
  const RtValue rhs = eval(e.children[1], env, st, depth + 1);

  switch (e.op) {
    case BinOp::add: {
      const Value& a = require_data(lhs, "operand of +");
      const Value& b = require_data(rhs, "operand of +");
      if (a.is_integer() && b.is_integer())
        return {Value::integer(checked(a.as_integer(), b.as_integer(), BinOp::add)), nullptr};
      if (a.is_string() && b.is_string()) return {Value::string(a.as_string() + b.as_string()), nullptr};
      throw EvalError("+ requires two integers or two strings");
    }
    case BinOp::sub:
    case BinOp::mul:
    case BinOp::div:
      return {Value::integer(checked(require_int(lhs, "arithmetic operand"),
                                     require_int(rhs, "arithmetic operand"), e.op)),
              nullptr};
    case BinOp::concat: {
      const Value& a = require_data(lhs, "operand of ++");
      const Value& b = require_data(rhs, "operand of ++");
      if (a.is_string() && b.is_string())
        return {Value::string(a.as_string() + b.as_string()), nullptr};
      if (a.is_list() && b.is_list()) {
        Value::List elems = a.as_list();
        elems.insert(elems.end(), b.as_list().begin(), b.as_list().end());
        return {Value::list(std::move(elems)), nullptr};
      }
      throw EvalError("++ requires two strings or two lists");
    }
    case BinOp::eq:
    case BinOp::ne: {
      const Value& a = require_data(lhs, "operand of equality");
      const Value& b = require_data(rhs, "operand of equality");
      const bool eq = a == b;
      return {Value::boolean(e.op == BinOp::eq ? eq : !eq), nullptr};
    }
    case BinOp::lt:
    case BinOp::le:
    case BinOp::gt:
    case BinOp::ge: {
      const std::int64_t a = require_int(lhs, "comparison operand");
      const std::int64_t b = require_int(rhs, "comparison operand");
      bool r = false;
      if (e.op == BinOp::lt) r = a < b;
      if (e.op == BinOp::le) r = a <= b;
      if (e.op == BinOp::gt) r = a > b;
      if (e.op == BinOp::ge) r = a >= b;
      return {Value::boolean(r), nullptr};
    }
    default:
      throw EvalError("unsupported operator");
  }
}

RtValue eval_builtin(const Expr& e, const EnvPtr& env, EvalState& st, std::uint32_t depth) {
  std::vector<RtValue> args;
  args.reserve(e.children.size());
  for (const Expr& c : e.children) args.push_back(eval(c, env, st, depth + 1));

  const std::string& name = e.name;
  if (name == "len") {
    const Value& v = require_data(args[0], "argument of len");
    if (v.is_list()) return {Value::integer(static_cast<std::int64_t>(v.as_list().size())), nullptr};
    if (v.is_map()) return {Value::integer(static_cast<std::int64_t>(v.as_map().size())), nullptr};
    if (v.is_string())
      return {Value::integer(static_cast<std::int64_t>(v.as_string().size())), nullptr};
    throw EvalError("len requires a list, map, or string");
  }
  if (name == "get") {
    const Value& c = require_data(args[0], "argument of get");
    if (c.is_list()) {
      const std::int64_t i = require_int(args[1], "list index");
      if (i < 0 || static_cast<std::size_t>(i) >= c.as_list().size())
        throw EvalError("list index " + std::to_string(i) + " out of range");
      return {c.as_list()[static_cast<std::size_t>(i)], nullptr};
    }
    if (c.is_map()) {
      const Value& k = require_data(args[1], "map key");
      if (!k.is_string()) throw EvalError("map key must be a string");
      const Value* found = c.find(k.as_string());
      if (!found) throw EvalError("no key '" + k.as_string() + "' in map");
      return {*found, nullptr};
    }
    throw EvalError("get requires a list or map");
  }
  if (name == "put") {
    const Value& c = require_data(args[0], "argument of put");
    const Value& v = require_data(args[2], "stored value");
    if (c.is_list()) {
      const std::int64_t i = require_int(args[1], "list index");
      if (i < 0 || static_cast<std::size_t>(i) >= c.as_list().size())
        throw EvalError("list index " + std::to_string(i) + " out of range");
      Value::List elems = c.as_list();
      elems[static_cast<std::size_t>(i)] = v;
      return {Value::list(std::move(elems)), nullptr};
    }
    if (c.is_map()) {
      const Value& k = require_data(args[1], "map key");
      if (!k.is_string()) throw EvalError("map key must be a string");
      Value out = c;
      out.set(k.as_string(), v);
      return {std::move(out), nullptr};
    }
    throw EvalError("put requires a list or map");
  }
  if (name == "push") {
    const Value& c = require_data(args[0], "argument of push");
    if (!c.is_list()) throw EvalError("push requires a list");
    Value::List elems = c.as_list();
    elems.push_back(require_data(args[1], "pushed value"));
    return {Value::list(std::move(elems)), nullptr};
  }
  if (name == "has") {
    const Value& c = require_data(args[0], "argument of has");
    const Value& k = require_data(args[1], "map key");
    if (!c.is_map() || !k.is_string()) throw EvalError("has requires a map and a string key");
    return {Value::boolean(c.find(k.as_string()) != nullptr), nullptr};
  }
  if (name == "keys") {
    const Value& c = require_data(args[0], "argument of keys");
    if (!c.is_map()) throw EvalError("keys requires a map");
    Value::List out;
    for (const auto& [key, _] : c.as_map()) out.push_back(Value::string(key));
    return {Value::list(std::move(out)), nullptr};
  }
  if (name == "str") {
    const Value& v = require_data(args[0], "argument of str");
    if (v.is_integer()) return {Value::string(std::to_string(v.as_integer())), nullptr};
    if (v.is_boolean()) return {Value::string(v.as_boolean() ? "true" : "false"), nullptr};
    if (v.is_string()) return {v, nullptr};
    throw EvalError("str requires an integer, boolean, or string");
  }
  throw EvalError("unknown builtin '" + name + "'");
}

RtValue eval(const Expr& e, const EnvPtr& env, EvalState& st, std::uint32_t depth) {
  if (st.budget == 0) throw EvalError("compute step budget exceeded");
  --st.budget;
  if (depth > kMaxEvalDepth) throw EvalError("evaluation recursion too deep");

  switch (e.kind) {
    case ExprKind::literal:
      return {e.literal, nullptr};
    case ExprKind::var: {
      for (const EnvNode* n = env.get(); n; n = n->next.get())
        if (n->name == e.name) return n->value;
      if (const Value* v = st.base_env->find(e.name)) return {*v, nullptr};
      throw EvalError("unbound identifier '" + e.name + "'");
    }
    case ExprKind::field_access: {
      const RtValue base = eval(e.children[0], env, st, depth + 1);
      const Value& m = require_data(base, "field access base");
      if (!m.is_map()) throw EvalError("field access on a non-map value");
      const Value* v = m.find(e.name);
      if (!v) throw EvalError("no field '" + e.name + "'");
      return {*v, nullptr};
    }
    case ExprKind::let: {
      RtValue bound = eval(e.children[0], env, st, depth + 1);
      const EnvPtr extended =
          std::make_shared<const EnvNode>(EnvNode{e.name, std::move(bound), env});
      return eval(e.children[1], extended, st, depth + 1);
    }
    case ExprKind::if_: {
      const bool cond = require_bool(eval(e.children[0], env, st, depth + 1), "if condition");
      return eval(e.children[cond ? 1 : 2], env, st, depth + 1);
    }
    case ExprKind::binop:
      return eval_binop(e, env, st, depth);
    case ExprKind::lambda:
      return {Value::unit(), std::make_shared<const Closure>(Closure{e.name, &e.children[0], env})};
    case ExprKind::apply: {
      const RtValue fn = eval(e.children[0], env, st, depth + 1);
      if (!fn.is_closure()) throw EvalError("cannot apply a non-function value");
      RtValue arg = eval(e.children[1], env, st, depth + 1);
      const EnvPtr extended = std::make_shared<const EnvNode>(
          EnvNode{fn.closure->param, std::move(arg), fn.closure->env});
      return eval(*fn.closure->body, extended, st, depth + 1);
    }
    case ExprKind::builtin_call:
      return eval_builtin(e, env, st, depth);
  }
  throw EvalError("malformed expression node");
}

}  // namespace

Value eval_expr(const lang::Expr& expr, const Value& env, std::uint64_t step_budget) {
  if (!env.is_map()) throw EvalError("environment must be a map");
  EvalState st{&env, step_budget};
  RtValue result = eval(expr, nullptr, st, 0);
  if (result.is_closure()) throw EvalError("expression evaluated to a function, not data");
  return std::move(result.data);
}

}  // namespace idc::runtime
