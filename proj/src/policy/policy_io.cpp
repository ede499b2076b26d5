#include "idc/policy/policy_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace idc {

namespace {

using nlohmann::json;

Predicate predicate_from_json(const json& j) {
  if (!j.is_object()) throw PolicyError("predicate must be an object");
  const auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string())
    throw PolicyError("predicate needs a string \"kind\"");
  const std::string kind = kind_it->get<std::string>();

  auto field = [&j]() -> std::string {
    const auto it = j.find("field");
    if (it == j.end() || !it->is_string()) throw PolicyError("predicate needs a string \"field\"");
    return it->get<std::string>();
  };

  if (kind == "string_prefix") {
    const auto it = j.find("prefix");
    if (it == j.end() || !it->is_string()) throw PolicyError("string_prefix needs \"prefix\"");
    return Predicate::string_prefix(field(), it->get<std::string>());
  }
  if (kind == "set_member") {
    const auto it = j.find("allowed");
    if (it == j.end() || !it->is_array()) throw PolicyError("set_member needs \"allowed\" array");
    std::vector<std::string> allowed;
    for (const auto& e : *it) {
      if (!e.is_string()) throw PolicyError("set_member entries must be strings");
      allowed.push_back(e.get<std::string>());
    }
    return Predicate::set_member(field(), std::move(allowed));
  }
  if (kind == "numeric_cmp") {
    const auto op_it = j.find("op");
    if (op_it == j.end() || !op_it->is_string()) throw PolicyError("numeric_cmp needs \"op\"");
    const auto op = cmp_op_from_name(op_it->get<std::string>());
    if (!op) throw PolicyError("unknown numeric_cmp op: " + op_it->get<std::string>());
    const auto bound_it = j.find("bound");
    if (bound_it == j.end() || !bound_it->is_number_integer())
      throw PolicyError("numeric_cmp needs integer \"bound\"");
    return Predicate::numeric_cmp(field(), *op, bound_it->get<std::int64_t>());
  }
  if (kind == "all_of" || kind == "any_of") {
    const auto it = j.find("children");
    if (it == j.end() || !it->is_array()) throw PolicyError(kind + " needs \"children\" array");
    std::vector<Predicate> children;
    for (const auto& e : *it) children.push_back(predicate_from_json(e));
    return kind == "all_of" ? Predicate::all_of(std::move(children))
                            : Predicate::any_of(std::move(children));
  }
  if (kind == "negate") {
    const auto it = j.find("child");
    if (it == j.end()) throw PolicyError("negate needs \"child\"");
    return Predicate::negate(predicate_from_json(*it));
  }
  if (kind == "always_true") return Predicate::always_true();
  throw PolicyError("unknown predicate kind: " + kind);
}

json predicate_to_json(const Predicate& p) {
  json j = json::object();
  switch (p.kind) {
    case PredicateKind::string_prefix:
      j["kind"] = "string_prefix";
      j["field"] = p.field_path;
      j["prefix"] = p.prefix;
      break;
    case PredicateKind::set_member:
      j["kind"] = "set_member";
      j["field"] = p.field_path;
      j["allowed"] = p.allowed;
      break;
    case PredicateKind::numeric_cmp:
      j["kind"] = "numeric_cmp";
      j["field"] = p.field_path;
      j["op"] = std::string(cmp_op_name(p.op));
      j["bound"] = p.bound;
      break;
    case PredicateKind::all_of:
    case PredicateKind::any_of: {
      j["kind"] = p.kind == PredicateKind::all_of ? "all_of" : "any_of";
      json children = json::array();
      for (const Predicate& c : p.children) children.push_back(predicate_to_json(c));
      j["children"] = std::move(children);
      break;
    }
    case PredicateKind::negate:
      j["kind"] = "negate";
      j["child"] = predicate_to_json(p.children.at(0));
      break;
    case PredicateKind::always_true:
      j["kind"] = "always_true";
      break;
  }
  return j;
}

Decision decision_from_json(const json& j, const char* what) {
  if (!j.is_string()) throw PolicyError(std::string(what) + " must be a string");
  const std::string s = j.get<std::string>();
  if (s == "allow") return Decision::allow;
  if (s == "deny") return Decision::deny;
  if (s == "escalate") return Decision::escalate;
  throw PolicyError("unknown decision: " + s);
}

}  // namespace

PolicySet policy_from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw PolicyError(std::string("invalid policy JSON: ") + e.what());
  }
  if (!j.is_object()) throw PolicyError("policy must be a JSON object");

  PolicySet policy;
  const auto id_it = j.find("policy_id");
  if (id_it == j.end() || !id_it->is_string()) throw PolicyError("policy needs \"policy_id\"");
  policy.policy_id = id_it->get<std::string>();

  const auto def_it = j.find("default");
  if (def_it == j.end()) throw PolicyError("policy needs \"default\"");
  policy.default_decision = decision_from_json(*def_it, "default");

  const auto rules_it = j.find("rules");
  if (rules_it == j.end() || !rules_it->is_array()) throw PolicyError("policy needs \"rules\" array");
  for (const auto& rj : *rules_it) {
    if (!rj.is_object()) throw PolicyError("rule must be an object");
    PolicyRule rule;
    const auto rid = rj.find("id");
    if (rid == rj.end() || !rid->is_string()) throw PolicyError("rule needs \"id\"");
    rule.id = rid->get<std::string>();
    const auto eff = rj.find("effect");
    if (eff == rj.end()) throw PolicyError("rule needs \"effect\"");
    rule.effect = decision_from_json(*eff, "effect");
    const auto pred = rj.find("predicate");
    if (pred == rj.end()) throw PolicyError("rule needs \"predicate\"");
    rule.predicate = predicate_from_json(*pred);
    policy.rules.push_back(std::move(rule));
  }

  validate_policy(policy);
  return policy;
}

PolicySet load_policy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PolicyError("cannot open policy file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return policy_from_json_text(buf.str());
}

std::string policy_to_json_text(const PolicySet& policy) {
  json j;
  j["policy_id"] = policy.policy_id;
  j["default"] = std::string(decision_name(policy.default_decision));
  json rules = json::array();
  for (const PolicyRule& rule : policy.rules) {
    json rj;
    rj["id"] = rule.id;
    rj["effect"] = std::string(decision_name(rule.effect));
    rj["predicate"] = predicate_to_json(rule.predicate);
    rules.push_back(std::move(rj));
  }
  j["rules"] = std::move(rules);
  return j.dump(2);
}

}  // namespace idc
