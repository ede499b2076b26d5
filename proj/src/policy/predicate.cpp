#include <algorithm>

#include "idc/policy/policy.hpp"

namespace idc {

std::string_view cmp_op_name(CmpOp op) {
  switch (op) {
    case CmpOp::lt:
      return "<";
    case CmpOp::le:
      return "<=";
    case CmpOp::eq:
      return "=";
    case CmpOp::ge:
      return ">=";
    case CmpOp::gt:
      return ">";
    case CmpOp::ne:
      return "!=";
  }
  return "=";
}

std::optional<CmpOp> cmp_op_from_name(std::string_view name) {
  if (name == "<") return CmpOp::lt;
  if (name == "<=") return CmpOp::le;
  if (name == "=" || name == "==") return CmpOp::eq;
  if (name == ">=") return CmpOp::ge;
  if (name == ">") return CmpOp::gt;
  if (name == "!=") return CmpOp::ne;
  return std::nullopt;
}

Predicate Predicate::string_prefix(std::string field_path, std::string prefix) {
  Predicate p;
  p.kind = PredicateKind::string_prefix;
  p.field_path = std::move(field_path);
  p.prefix = std::move(prefix);
  return p;
}

Predicate Predicate::set_member(std::string field_path, std::vector<std::string> allowed) {
  Predicate p;
  p.kind = PredicateKind::set_member;
  p.field_path = std::move(field_path);
  p.allowed = std::move(allowed);
  return p;
}

Predicate Predicate::numeric_cmp(std::string field_path, CmpOp op, std::int64_t bound) {
  Predicate p;
  p.kind = PredicateKind::numeric_cmp;
  p.field_path = std::move(field_path);
  p.op = op;
  p.bound = bound;
  return p;
}

Predicate Predicate::all_of(std::vector<Predicate> children) {
  Predicate p;
  p.kind = PredicateKind::all_of;
  p.children = std::move(children);
  return p;
}

Predicate Predicate::any_of(std::vector<Predicate> children) {
  Predicate p;
  p.kind = PredicateKind::any_of;
  p.children = std::move(children);
  return p;
}

Predicate Predicate::negate(Predicate child) {
  Predicate p;
  p.kind = PredicateKind::negate;
  p.children.push_back(std::move(child));
  return p;
}

Predicate Predicate::always_true() { return Predicate{}; }

std::size_t Predicate::node_count() const {
  std::size_t n = 1;
  for (const Predicate& c : children) n += c.node_count();
  return n;
}

std::size_t Predicate::depth() const {
  std::size_t d = 0;
  for (const Predicate& c : children) d = std::max(d, c.depth());
  return d + 1;
}

void validate_predicate(const Predicate& p) {
  if (p.kind == PredicateKind::negate && p.children.size() != 1)
    throw PolicyError("negate requires exactly one child");
  if ((p.kind == PredicateKind::string_prefix || p.kind == PredicateKind::set_member ||
       p.kind == PredicateKind::numeric_cmp) &&
      p.field_path.empty())
    throw PolicyError("atomic predicate requires a field path");
  if (p.depth() > kMaxPredicateDepth) throw PolicyError("predicate exceeds depth bound");
  if (p.node_count() > kMaxPredicateNodes) throw PolicyError("predicate exceeds node bound");
  for (const Predicate& c : p.children) validate_predicate(c);
}

void validate_policy(const PolicySet& policy) {
  std::vector<std::string_view> seen;
  for (const PolicyRule& rule : policy.rules) {
    if (rule.id.empty()) throw PolicyError("rule id is empty");
    if (is_reserved_rule_id(rule.id)) throw PolicyError("rule id is reserved: " + rule.id);
    if (std::find(seen.begin(), seen.end(), rule.id) != seen.end())
      throw PolicyError("duplicate rule id: " + rule.id);
    seen.push_back(rule.id);
    validate_predicate(rule.predicate);
  }
}

}  // namespace idc
