#include "progen.hpp"

namespace idc::testgen {

namespace lang = idc::lang;

namespace {

const std::vector<std::string>& ident_pool() {
  static const std::vector<std::string> pool = {
      "x", "y", "z", "total", "draft", "label", "amount", "item", "acc", "flag2",
  };
  return pool;
}

std::string fresh_ident(Rng& rng, const std::vector<std::string>& scope) {
  for (int tries = 0; tries < 8; ++tries) {
    std::string name = ident_pool()[pick_index(rng, ident_pool().size())];
    bool taken = false;
    for (const std::string& s : scope) taken = taken || s == name;
    if (!taken) return name;
  }
  return "v" + std::to_string(pick_int(rng, 0, 1 << 20));
}

// surface-representable strings only (escapable control chars)
std::string surface_string(Rng& rng) {
  std::string s = random_string(rng);
  std::string out;
  for (char c : s) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x20 && c != '\n' && c != '\t') continue;
    out += c;
  }
  return out;
}

Value surface_value(Rng& rng, int depth_budget) {
  const std::int64_t roll = pick_int(rng, 0, depth_budget > 0 ? 6 : 4);
  switch (roll) {
    case 0:
      return Value::unit();
    case 1:
      return Value::boolean(pick_int(rng, 0, 1) == 1);
    case 2:
    case 3:
      return Value::integer(pick_int(rng, -100000, 100000));
    case 4:
      return Value::string(surface_string(rng));
    case 5: {
      Value::List elems;
      const std::int64_t n = pick_int(rng, 0, 3);
      for (std::int64_t i = 0; i < n; ++i) elems.push_back(surface_value(rng, depth_budget - 1));
      return Value::list(std::move(elems));
    }
    default: {
      Value out = Value::empty_map();
      const std::int64_t n = pick_int(rng, 0, 3);
      for (std::int64_t i = 0; i < n; ++i) {
        if (pick_int(rng, 0, 3) == 0)
          out.set(surface_string(rng), surface_value(rng, depth_budget - 1));
        else
          out.set(ident_pool()[pick_index(rng, ident_pool().size())],
                  surface_value(rng, depth_budget - 1));
      }
      return out;
    }
  }
}

}  // namespace

lang::Expr random_expr(Rng& rng, std::vector<std::string> scope, int depth_budget) {
  const std::int64_t roll = pick_int(rng, 0, depth_budget > 0 ? 11 : 2);
  switch (roll) {
    case 0:
    case 1:
      return lang::make_literal(surface_value(rng, 2));
    case 2: {
      if (scope.empty()) return lang::make_literal(Value::integer(pick_int(rng, 0, 9)));
      return lang::make_var(scope[pick_index(rng, scope.size())]);
    }
    case 3:
      return lang::make_field_access(random_expr(rng, scope, depth_budget - 1),
                                     ident_pool()[pick_index(rng, ident_pool().size())]);
    case 4: {
      const std::string name = fresh_ident(rng, scope);
      lang::Expr bound = random_expr(rng, scope, depth_budget - 1);
      scope.push_back(name);
      lang::Expr body = random_expr(rng, scope, depth_budget - 1);
      return lang::make_let(name, std::move(bound), std::move(body));
    }
    case 5:
      return lang::make_if(random_expr(rng, scope, depth_budget - 1),
                           random_expr(rng, scope, depth_budget - 1),
                           random_expr(rng, scope, depth_budget - 1));
    case 6:
    case 7: {
      static constexpr lang::BinOp ops[] = {
          lang::BinOp::add, lang::BinOp::sub,         lang::BinOp::mul,       lang::BinOp::div,
          lang::BinOp::concat, lang::BinOp::eq,       lang::BinOp::ne,        lang::BinOp::lt,
          lang::BinOp::le,  lang::BinOp::gt,          lang::BinOp::ge,
          lang::BinOp::logical_and, lang::BinOp::logical_or};
      return lang::make_binop(ops[pick_index(rng, std::size(ops))],
                              random_expr(rng, scope, depth_budget - 1),
                              random_expr(rng, scope, depth_budget - 1));
    }
    case 8: {
      const std::string param = fresh_ident(rng, scope);
      scope.push_back(param);
      return lang::make_lambda(param, random_expr(rng, scope, depth_budget - 1));
    }
    case 9:
      return lang::make_apply(random_expr(rng, scope, depth_budget - 1),
                              random_expr(rng, scope, depth_budget - 1));
    default: {
      const lang::BuiltinSpec& b = lang::kBuiltins[pick_index(rng, std::size(lang::kBuiltins))];
      std::vector<lang::Expr> args;
      for (std::size_t i = 0; i < b.arity; ++i)
        args.push_back(random_expr(rng, scope, depth_budget - 1));
      return lang::make_builtin_call(std::string(b.name), std::move(args));
    }
  }
}

lang::ProgramAst random_program_ast(Rng& rng) {
  lang::ProgramAst ast;
  ast.name = "prog" + std::to_string(pick_int(rng, 0, 9999));
  const std::int64_t caps = pick_int(rng, 0, 3);
  for (std::int64_t i = 0; i < caps; ++i) {
    static const std::vector<std::string> cap_pool = {"email.", "kv.", "payment.refund",
                                                      "file.write", "http."};
    const std::string cap = cap_pool[pick_index(rng, cap_pool.size())];
    bool dup = false;
    for (const std::string& c : ast.capabilities) dup = dup || c == cap;
    if (!dup) ast.capabilities.push_back(cap);
  }

  std::vector<std::string> scope = {"context"};
  const std::int64_t steps = pick_int(rng, 0, 5);
  for (std::int64_t i = 0; i < steps; ++i) {
    const std::string name = "s" + std::to_string(i);
    if (pick_int(rng, 0, 2) > 0) {
      ast.steps.push_back(lang::ComputeStep{name, name, random_expr(rng, scope, 3)});
    } else {
      lang::AskStep ask;
      ask.name = name;
      ask.binding = name;
      static const std::vector<std::string> machines = {
          "@stdlib/email/send", "@stdlib/kv/put", "@stdlib/kv/get", "@stdlib/payment/refund"};
      ask.machine = machines[pick_index(rng, machines.size())];
      const std::int64_t fields = pick_int(rng, 0, 3);
      for (std::int64_t f = 0; f < fields; ++f) {
        const std::string key = "f" + std::to_string(f);
        ask.input_fields.emplace_back(key, random_expr(rng, scope, 2));
      }
      ast.steps.push_back(std::move(ask));
    }
    scope.push_back(name);
  }
  return ast;
}

namespace {

lang::Expr safe_string_expr(Rng& rng) {
  if (pick_int(rng, 0, 1) == 0) return lang::make_literal(Value::string(surface_string(rng)));
  return lang::make_binop(
      lang::BinOp::add, lang::make_literal(Value::string("msg ")),
      lang::make_builtin_call("str",
                              {lang::make_literal(Value::integer(pick_int(rng, 0, 9999)))}));
}

// expressions that always evaluate without error: literals, bound names,
// and string concatenation over str() of those
lang::Expr safe_expr(Rng& rng, const std::vector<std::string>& scope) {
  switch (pick_int(rng, 0, 4)) {
    case 0:
      return lang::make_literal(Value::integer(pick_int(rng, 0, 5000)));
    case 1:
      return lang::make_literal(Value::string(surface_string(rng)));
    case 2:
      return lang::make_binop(lang::BinOp::add,
                              lang::make_literal(Value::integer(pick_int(rng, 0, 1000))),
                              lang::make_literal(Value::integer(pick_int(rng, 0, 1000))));
    case 3:
      return lang::make_builtin_call(
          "str", {lang::make_literal(Value::integer(pick_int(rng, -99, 99)))});
    default:
      if (!scope.empty() && pick_int(rng, 0, 1) == 0)
        return lang::make_builtin_call(
            "str", {lang::make_builtin_call(
                       "len", {lang::make_builtin_call(
                                  "str", {lang::make_literal(Value::integer(
                                             pick_int(rng, 0, 999999)))})})});
      return lang::make_literal(Value::boolean(pick_int(rng, 0, 1) == 1));
  }
}

}  // namespace

lang::ProgramAst random_runnable_program(Rng& rng, bool full_capabilities) {
  lang::ProgramAst ast;
  ast.name = "run" + std::to_string(pick_int(rng, 0, 9999));
  if (full_capabilities) {
    ast.capabilities = {"email.", "kv.", "payment.", "http.", "file."};
  } else {
    static const std::vector<std::string> cap_pool = {"email.", "kv.", "payment.", "http.",
                                                      "file."};
    const std::int64_t n = pick_int(rng, 0, 4);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::string cap = cap_pool[pick_index(rng, cap_pool.size())];
      bool dup = false;
      for (const std::string& c : ast.capabilities) dup = dup || c == cap;
      if (!dup) ast.capabilities.push_back(cap);
    }
  }

  std::vector<std::string> scope;
  const std::int64_t steps = pick_int(rng, 1, 6);
  for (std::int64_t i = 0; i < steps; ++i) {
    const std::string name = "s" + std::to_string(i);
    const std::int64_t roll = pick_int(rng, 0, 9);
    if (roll < 3) {
      ast.steps.push_back(lang::ComputeStep{name, name, safe_expr(rng, scope)});
    } else {
      lang::AskStep ask;
      ask.name = name;
      ask.binding = name;
      // handler-safe parameter sets only
      switch (pick_int(rng, 0, 4)) {
        case 0:
          ask.machine = "@stdlib/kv/put";
          ask.input_fields.emplace_back(
              "key", lang::make_literal(Value::string("k" + std::to_string(pick_int(rng, 0, 30)))));
          ask.input_fields.emplace_back("value", safe_expr(rng, scope));
          break;
        case 1:
          ask.machine = "@stdlib/kv/get";
          ask.input_fields.emplace_back(
              "key", lang::make_literal(Value::string("k" + std::to_string(pick_int(rng, 0, 30)))));
          break;
        case 2:
          ask.machine = "@stdlib/payment/refund";
          ask.input_fields.emplace_back(
              "request_id",
              lang::make_literal(Value::string("rq" + std::to_string(pick_int(rng, 0, 9999)))));
          ask.input_fields.emplace_back(
              "amount_cents", lang::make_literal(Value::integer(pick_int(rng, 1, 200000))));
          break;
        case 3:
          ask.machine = "@stdlib/email/send";
          ask.input_fields.emplace_back(
              "to", lang::make_literal(Value::string("u" + std::to_string(pick_int(rng, 0, 99)) +
                                                     "@example.test")));
          ask.input_fields.emplace_back("subject", safe_string_expr(rng));
          ask.input_fields.emplace_back("body", safe_string_expr(rng));
          break;
        default:
          ask.machine = "@stdlib/file/write";
          ask.input_fields.emplace_back(
              "path",
              lang::make_literal(Value::string("notes/n" + std::to_string(pick_int(rng, 0, 50)) +
                                               ".txt")));
          ask.input_fields.emplace_back("content", safe_string_expr(rng));
          break;
      }
      ast.steps.push_back(std::move(ask));
    }
    scope.push_back(name);
  }
  return ast;
}

PolicySet random_run_policy(Rng& rng) {
  PolicySet policy;
  policy.policy_id = "run-policy-" + std::to_string(pick_int(rng, 0, 99999));
  policy.default_decision = pick_int(rng, 0, 3) == 0 ? Decision::deny : Decision::allow;
  static const std::vector<std::string> prefixes = {"email.", "kv.",  "kv.put", "payment.",
                                                    "file.",  "http."};
  const std::int64_t n = pick_int(rng, 0, 6);
  for (std::int64_t i = 0; i < n; ++i) {
    PolicyRule rule;
    rule.id = "p" + std::to_string(i);
    const std::int64_t effect_roll = pick_int(rng, 0, 9);
    rule.effect = effect_roll < 6 ? Decision::allow
                                  : (effect_roll < 8 ? Decision::deny : Decision::escalate);
    if (pick_int(rng, 0, 3) == 0) {
      rule.predicate = Predicate::numeric_cmp("params.amount_cents", CmpOp::gt,
                                              pick_int(rng, 1000, 150000));
    } else {
      rule.predicate =
          Predicate::string_prefix("action", prefixes[pick_index(rng, prefixes.size())]);
    }
    policy.rules.push_back(std::move(rule));
  }
  validate_policy(policy);
  return policy;
}

}  // namespace idc::testgen
