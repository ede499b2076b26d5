#include "idc/policy/oracle.hpp"

#include <map>

namespace idc {

namespace {

// Flatten every addressable field into an explicit path table.
void flatten_into(std::map<std::string, Value>& table, const std::string& prefix, const Value& v) {
  table[prefix] = v;
  if (v.is_map()) {
    for (const auto& [key, child] : v.as_map()) flatten_into(table, prefix + "." + key, child);
  }
}

std::map<std::string, Value> flat_view(const Intent& intent, const Value& context) {
  std::map<std::string, Value> table;
  table["action"] = Value::string(intent.action);
  table["target"] = Value::string(intent.target);
  if (intent.params.is_map()) {
    for (const auto& [key, child] : intent.params.as_map())
      flatten_into(table, "params." + key, child);
  }
  if (context.is_map()) {
    for (const auto& [key, child] : context.as_map())
      flatten_into(table, "context." + key, child);
  }
  return table;
}

bool naive_eval(const Predicate& p, const std::map<std::string, Value>& fields) {
  if (p.kind == PredicateKind::always_true) return true;
  if (p.kind == PredicateKind::negate) return !naive_eval(p.children.at(0), fields);
  if (p.kind == PredicateKind::all_of) {
    bool all = true;
    for (const Predicate& c : p.children) all = naive_eval(c, fields) && all;
    return all;
  }
  if (p.kind == PredicateKind::any_of) {
    bool any = false;
    for (const Predicate& c : p.children) any = naive_eval(c, fields) || any;
    return any;
  }

  const auto it = fields.find(p.field_path);
  if (it == fields.end()) return false;
  const Value& v = it->second;

  if (p.kind == PredicateKind::string_prefix) {
    if (!v.is_string()) return false;
    const std::string& s = v.as_string();
    if (p.prefix.size() > s.size()) return false;
    return s.substr(0, p.prefix.size()) == p.prefix;
  }
  if (p.kind == PredicateKind::set_member) {
    if (!v.is_string()) return false;
    bool found = false;
    for (const std::string& candidate : p.allowed)
      if (candidate == v.as_string()) found = true;
    return found;
  }
  if (p.kind == PredicateKind::numeric_cmp) {
    if (!v.is_integer()) return false;
    const std::int64_t x = v.as_integer();
    const std::int64_t b = p.bound;
    switch (p.op) {
      case CmpOp::lt:
        return x < b;
      case CmpOp::le:
        return !(x > b);
      case CmpOp::eq:
        return x == b;
      case CmpOp::ge:
        return !(x < b);
      case CmpOp::gt:
        return x > b;
      case CmpOp::ne:
        return !(x == b);
    }
  }
  return false;
}

}  // namespace

GovernanceOutcome oracle_decide(const PolicySet& policy, const Intent& intent,
                                const Value& context) {
  const auto fields = flat_view(intent, context);

  std::vector<bool> matched(policy.rules.size(), false);
  for (std::size_t i = 0; i < policy.rules.size(); ++i)
    matched[i] = naive_eval(policy.rules[i].predicate, fields);

  GovernanceOutcome out;
  out.intent = intent;
  out.policy_id = policy.policy_id;
  out.context = context;
  for (std::size_t i = 0; i < policy.rules.size(); ++i)
    if (matched[i]) out.applied_rules.push_back(policy.rules[i].id);

  // Three passes, strongest vote first.
  out.decision = policy.default_decision;
  bool decided = false;
  for (std::size_t i = 0; i < policy.rules.size(); ++i) {
    if (matched[i] && policy.rules[i].effect == Decision::deny && !decided) {
      out.decision = Decision::deny;
      decided = true;
    }
  }
  for (std::size_t i = 0; i < policy.rules.size(); ++i) {
    if (matched[i] && policy.rules[i].effect == Decision::escalate && !decided) {
      out.decision = Decision::escalate;
      decided = true;
    }
  }
  for (std::size_t i = 0; i < policy.rules.size(); ++i) {
    if (matched[i] && policy.rules[i].effect == Decision::allow && !decided) {
      out.decision = Decision::allow;
      decided = true;
    }
  }
  return out;
}

}  // namespace idc
