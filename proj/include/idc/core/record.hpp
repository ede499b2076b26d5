#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "idc/core/intent.hpp"

namespace idc {

enum class Decision { allow, deny, escalate };
inline constexpr int kDecisionCount = 3;

std::string_view decision_name(Decision d);
Decision decision_from_name(std::string_view name);

// Pseudo rule ids the runtime records outside of decide(): a capability
// check that failed before policy evaluation, and a human escalation
// resolution. Everything else in applied_rules must be a policy rule id.
inline constexpr std::string_view kCapabilityMissRuleId = "capability-miss";
inline constexpr std::string_view kEscalationResolutionPrefix = "escalation-resolution:";

bool is_reserved_rule_id(std::string_view rule_id);

// One sealed ledger entry for a governance decision.
struct DecisionRecord {
  std::uint64_t seq = 0;
  std::int64_t timestamp_us = 0;  // microseconds since Unix epoch
  Intent intent;
  Decision decision = Decision::deny;
  std::vector<std::string> applied_rules;
  std::string policy_id;
  Value context = Value::empty_map();  // the c passed to the governance interpreter
  std::string prev_hash;               // 64-char lowercase hex
  std::string hash;                    // chain_hash(bytes-sans-hash, prev_hash)

  bool operator==(const DecisionRecord& other) const = default;
};

// Audit marker appended when effect realization fails after an allow.
// Hash-chained like a decision record; distinguished on disk by
// "kind":"realization-failed".
struct MarkerRecord {
  std::uint64_t seq = 0;
  std::int64_t timestamp_us = 0;
  Intent intent;
  std::string error_kind;  // unknown-machine | param-validation-failure | handler-failure
  std::string policy_id;
  std::string prev_hash;
  std::string hash;

  bool operator==(const MarkerRecord& other) const = default;
};

using LedgerEntry = std::variant<DecisionRecord, MarkerRecord>;

std::uint64_t entry_seq(const LedgerEntry& e);
const std::string& entry_prev_hash(const LedgerEntry& e);
const std::string& entry_hash(const LedgerEntry& e);

// Canonical bytes of all fields except `hash`; the chain_hash input.
std::string canonical_sans_hash(const DecisionRecord& r);
std::string canonical_sans_hash(const MarkerRecord& r);

// Full line as persisted (hash field included, trailing newline excluded).
std::string canonical_line(const DecisionRecord& r);
std::string canonical_line(const MarkerRecord& r);
std::string canonical_line(const LedgerEntry& e);

// Computes and stores r.hash from the other fields.
void seal(DecisionRecord& r);
void seal(MarkerRecord& r);

// True iff hash == chain_hash(canonical_sans_hash, prev_hash).
bool hash_consistent(const LedgerEntry& e);

// Parses one JSONL line. Throws DeserializationError on malformed input
// (unknown keys, missing fields, bad digests, non-canonical shapes).
LedgerEntry parse_ledger_line(std::string_view line);

}  // namespace idc
