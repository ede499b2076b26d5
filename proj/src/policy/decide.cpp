#include "idc/policy/policy.hpp"

namespace idc {

const Value* resolve_field(const Intent& intent, const Value& context,
                           std::string_view field_path) {
  // "action" and "target" address the intent's own strings; expose them
  // through thread-local scratch values so the return type stays uniform.
  thread_local Value scratch;
  if (field_path == "action") {
    scratch = Value::string(intent.action);
    return &scratch;
  }
  if (field_path == "target") {
    scratch = Value::string(intent.target);
    return &scratch;
  }

  std::string_view rest;
  const Value* node = nullptr;
  if (field_path.rfind("params.", 0) == 0) {
    node = &intent.params;
    rest = field_path.substr(7);
  } else if (field_path.rfind("context.", 0) == 0) {
    node = &context;
    rest = field_path.substr(8);
  } else {
    return nullptr;
  }
  // a path may not end in a dangling dot ("params.", "params.a.")
  if (rest.empty() || rest.back() == '.') return nullptr;

  while (!rest.empty()) {
    const std::size_t dot = rest.find('.');
    const std::string_view key = dot == std::string_view::npos ? rest : rest.substr(0, dot);
    rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
    if (key.empty() || !node->is_map()) return nullptr;
    node = node->find(key);
    if (!node) return nullptr;
  }
  return node;
}

namespace {

bool compare(CmpOp op, std::int64_t lhs, std::int64_t rhs) {
  switch (op) {
    case CmpOp::lt:
      return lhs < rhs;
    case CmpOp::le:
      return lhs <= rhs;
    case CmpOp::eq:
      return lhs == rhs;
    case CmpOp::ge:
      return lhs >= rhs;
    case CmpOp::gt:
      return lhs > rhs;
    case CmpOp::ne:
      return lhs != rhs;
  }
  return false;
}

}  // namespace

bool evaluate_predicate(const Predicate& p, const Intent& intent, const Value& context) {
  switch (p.kind) {
    case PredicateKind::always_true:
      return true;
    case PredicateKind::string_prefix: {
      const Value* v = resolve_field(intent, context, p.field_path);
      if (!v || !v->is_string()) return false;
      return v->as_string().rfind(p.prefix, 0) == 0;
    }
    case PredicateKind::set_member: {
      const Value* v = resolve_field(intent, context, p.field_path);
      if (!v || !v->is_string()) return false;
      for (const std::string& s : p.allowed)
        if (s == v->as_string()) return true;
      return false;
    }
    case PredicateKind::numeric_cmp: {
      const Value* v = resolve_field(intent, context, p.field_path);
      if (!v || !v->is_integer()) return false;
      return compare(p.op, v->as_integer(), p.bound);
    }
    case PredicateKind::all_of: {
      for (const Predicate& c : p.children)
        if (!evaluate_predicate(c, intent, context)) return false;
      return true;
    }
    case PredicateKind::any_of: {
      for (const Predicate& c : p.children)
        if (evaluate_predicate(c, intent, context)) return true;
      return false;
    }
    case PredicateKind::negate:
      return !evaluate_predicate(p.children.front(), intent, context);
  }
  return false;
}

GovernanceOutcome decide(const PolicySet& policy, const Intent& intent, const Value& context) {
  GovernanceOutcome out;
  out.intent = intent;
  out.policy_id = policy.policy_id;
  out.context = context;

  bool any_deny = false, any_escalate = false, any_allow = false;
  for (const PolicyRule& rule : policy.rules) {
    if (!evaluate_predicate(rule.predicate, intent, context)) continue;
    out.applied_rules.push_back(rule.id);
    switch (rule.effect) {
      case Decision::deny:
        any_deny = true;
        break;
      case Decision::escalate:
        any_escalate = true;
        break;
      case Decision::allow:
        any_allow = true;
        break;
    }
  }

  if (any_deny)
    out.decision = Decision::deny;
  else if (any_escalate)
    out.decision = Decision::escalate;
  else if (any_allow)
    out.decision = Decision::allow;
  else
    out.decision = policy.default_decision;
  return out;
}

}  // namespace idc
