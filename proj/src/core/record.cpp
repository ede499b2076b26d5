#include "idc/core/record.hpp"

#include <charconv>

#include "idc/core/canonical.hpp"
#include "idc/core/hash.hpp"

namespace idc {

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::allow:
      return "allow";
    case Decision::deny:
      return "deny";
    case Decision::escalate:
      return "escalate";
  }
  return "deny";
}

Decision decision_from_name(std::string_view name) {
  if (name == "allow") return Decision::allow;
  if (name == "deny") return Decision::deny;
  if (name == "escalate") return Decision::escalate;
  throw DeserializationError("unknown decision: " + std::string(name));
}

bool is_reserved_rule_id(std::string_view rule_id) {
  return rule_id == kCapabilityMissRuleId ||
         rule_id.substr(0, kEscalationResolutionPrefix.size()) == kEscalationResolutionPrefix;
}

std::uint64_t entry_seq(const LedgerEntry& e) {
  return std::visit([](const auto& r) { return r.seq; }, e);
}

const std::string& entry_prev_hash(const LedgerEntry& e) {
  return std::visit([](const auto& r) -> const std::string& { return r.prev_hash; }, e);
}

const std::string& entry_hash(const LedgerEntry& e) {
  return std::visit([](const auto& r) -> const std::string& { return r.hash; }, e);
}

namespace {

void append_uint(std::string& out, std::uint64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_int(std::string& out, std::int64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_quoted(std::string& out, std::string_view s) {
  out += '"';
  canonical_append_escaped(out, s);
  out += '"';
}

// Shared tail of a decision record: every field except `hash`, in
// canonical (sorted-key) order, optionally with the hash spliced in.
void append_decision_fields(std::string& out, const DecisionRecord& r, const std::string* hash) {
  out += "{\"applied_rules\":[";
  bool first = true;
  for (const std::string& id : r.applied_rules) {
    if (!first) out += ',';
    first = false;
    append_quoted(out, id);
  }
  out += "],\"context\":";
  canonical_append(out, r.context);
  out += ",\"decision\":\"";
  out += decision_name(r.decision);
  out += '"';
  if (hash) {
    out += ",\"hash\":";
    append_quoted(out, *hash);
  }
  out += ",\"intent\":";
  canonical_append(out, r.intent);
  out += ",\"policy_id\":";
  append_quoted(out, r.policy_id);
  out += ",\"prev_hash\":";
  append_quoted(out, r.prev_hash);
  out += ",\"seq\":";
  append_uint(out, r.seq);
  out += ",\"timestamp\":";
  append_int(out, r.timestamp_us);
  out += '}';
}

void append_marker_fields(std::string& out, const MarkerRecord& r, const std::string* hash) {
  out += "{\"error_kind\":";
  append_quoted(out, r.error_kind);
  if (hash) {
    out += ",\"hash\":";
    append_quoted(out, *hash);
  }
  out += ",\"intent\":";
  canonical_append(out, r.intent);
  out += ",\"kind\":\"realization-failed\",\"policy_id\":";
  append_quoted(out, r.policy_id);
  out += ",\"prev_hash\":";
  append_quoted(out, r.prev_hash);
  out += ",\"seq\":";
  append_uint(out, r.seq);
  out += ",\"timestamp\":";
  append_int(out, r.timestamp_us);
  out += '}';
}

}  // namespace

std::string canonical_sans_hash(const DecisionRecord& r) {
  std::string out;
  append_decision_fields(out, r, nullptr);
  return out;
}

std::string canonical_sans_hash(const MarkerRecord& r) {
  std::string out;
  append_marker_fields(out, r, nullptr);
  return out;
}

std::string canonical_line(const DecisionRecord& r) {
  std::string out;
  append_decision_fields(out, r, &r.hash);
  return out;
}

std::string canonical_line(const MarkerRecord& r) {
  std::string out;
  append_marker_fields(out, r, &r.hash);
  return out;
}

std::string canonical_line(const LedgerEntry& e) {
  return std::visit([](const auto& r) { return canonical_line(r); }, e);
}

void seal(DecisionRecord& r) { r.hash = chain_hash(canonical_sans_hash(r), r.prev_hash); }

void seal(MarkerRecord& r) { r.hash = chain_hash(canonical_sans_hash(r), r.prev_hash); }

bool hash_consistent(const LedgerEntry& e) {
  return std::visit(
      [](const auto& r) {
        return is_hex_digest(r.prev_hash) && is_hex_digest(r.hash) &&
               chain_hash(canonical_sans_hash(r), r.prev_hash) == r.hash;
      },
      e);
}

namespace {

const Value& expect_field(const Value& obj, std::string_view key) {
  const Value* v = obj.find(key);
  if (!v) throw DeserializationError("missing field: " + std::string(key));
  return *v;
}

std::string expect_string(const Value& obj, std::string_view key) {
  const Value& v = expect_field(obj, key);
  if (!v.is_string()) throw DeserializationError("field is not a string: " + std::string(key));
  return v.as_string();
}

std::string expect_digest(const Value& obj, std::string_view key) {
  std::string s = expect_string(obj, key);
  if (!is_hex_digest(s)) throw DeserializationError("field is not a hex digest: " + std::string(key));
  return s;
}

std::int64_t expect_integer(const Value& obj, std::string_view key) {
  const Value& v = expect_field(obj, key);
  if (!v.is_integer()) throw DeserializationError("field is not an integer: " + std::string(key));
  return v.as_integer();
}

Intent intent_from_value(const Value& v) {
  if (!v.is_map()) throw DeserializationError("intent is not an object");
  Intent intent;
  intent.action = expect_string(v, "action");
  intent.target = expect_string(v, "target");
  intent.params = expect_field(v, "params");
  intent.context = expect_field(v, "context");
  validate_intent(intent);
  return intent;
}

}  // namespace

LedgerEntry parse_ledger_line(std::string_view line) {
  const Value v = value_from_json_text(line);
  if (!v.is_map()) throw DeserializationError("ledger line is not an object");

  const std::int64_t seq = expect_integer(v, "seq");
  if (seq < 0) throw DeserializationError("negative seq");

  if (const Value* kind = v.find("kind")) {
    if (!kind->is_string() || kind->as_string() != "realization-failed")
      throw DeserializationError("unknown record kind");
    MarkerRecord r;
    r.seq = static_cast<std::uint64_t>(seq);
    r.timestamp_us = expect_integer(v, "timestamp");
    r.intent = intent_from_value(expect_field(v, "intent"));
    r.error_kind = expect_string(v, "error_kind");
    r.policy_id = expect_string(v, "policy_id");
    r.prev_hash = expect_digest(v, "prev_hash");
    r.hash = expect_digest(v, "hash");
    return r;
  }

  DecisionRecord r;
  r.seq = static_cast<std::uint64_t>(seq);
  r.timestamp_us = expect_integer(v, "timestamp");
  r.intent = intent_from_value(expect_field(v, "intent"));
  r.decision = decision_from_name(expect_string(v, "decision"));
  const Value& rules = expect_field(v, "applied_rules");
  if (!rules.is_list()) throw DeserializationError("applied_rules is not a list");
  for (const Value& id : rules.as_list()) {
    if (!id.is_string()) throw DeserializationError("applied rule id is not a string");
    r.applied_rules.push_back(id.as_string());
  }
  r.policy_id = expect_string(v, "policy_id");
  const Value& ctx = expect_field(v, "context");
  if (!ctx.is_map()) throw DeserializationError("context is not a map");
  r.context = ctx;
  r.prev_hash = expect_digest(v, "prev_hash");
  r.hash = expect_digest(v, "hash");
  return r;
}

}  // namespace idc
