#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idc/core/intent.hpp"
#include "idc/core/record.hpp"

namespace idc {

// Bounds that keep rule evaluation trivially total.
inline constexpr std::size_t kMaxPredicateDepth = 32;
inline constexpr std::size_t kMaxPredicateNodes = 1024;

enum class PredicateKind {
  string_prefix,
  set_member,
  numeric_cmp,
  all_of,
  any_of,
  negate,
  always_true,
};

enum class CmpOp { lt, le, eq, ge, gt, ne };

std::string_view cmp_op_name(CmpOp op);
std::optional<CmpOp> cmp_op_from_name(std::string_view name);

// Decidable predicate over one intent + context. field_path addresses a
// flat view of the intent: "action", "target", "params.<k>...",
// "context.<k>...". Atomic predicates evaluate false on absent fields
// and on type mismatch.
struct Predicate {
  PredicateKind kind = PredicateKind::always_true;
  std::string field_path;             // string_prefix | set_member | numeric_cmp
  std::string prefix;                 // string_prefix
  std::vector<std::string> allowed;   // set_member
  CmpOp op = CmpOp::eq;               // numeric_cmp
  std::int64_t bound = 0;             // numeric_cmp
  std::vector<Predicate> children;    // all_of | any_of | negate (exactly 1)

  static Predicate string_prefix(std::string field_path, std::string prefix);
  static Predicate set_member(std::string field_path, std::vector<std::string> allowed);
  static Predicate numeric_cmp(std::string field_path, CmpOp op, std::int64_t bound);
  static Predicate all_of(std::vector<Predicate> children);
  static Predicate any_of(std::vector<Predicate> children);
  static Predicate negate(Predicate child);
  static Predicate always_true();

  std::size_t node_count() const;
  std::size_t depth() const;
};

class PolicyError : public std::runtime_error {
public:
  explicit PolicyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Throws PolicyError when depth/node bounds are exceeded or a negate
// does not have exactly one child.
void validate_predicate(const Predicate& p);

struct PolicyRule {
  std::string id;
  Predicate predicate;
  Decision effect = Decision::deny;  // the decision this rule votes for when it matches
};

struct PolicySet {
  std::string policy_id;
  std::vector<PolicyRule> rules;
  Decision default_decision = Decision::deny;
};

// Throws PolicyError on empty/duplicate rule ids, reserved rule ids, or
// invalid predicates.
void validate_policy(const PolicySet& policy);

// Everything append() needs except seq/prev_hash/timestamp/hash.
struct GovernanceOutcome {
  Decision decision = Decision::deny;
  std::vector<std::string> applied_rules;  // matching rules, in policy order
  Intent intent;
  std::string policy_id;
  Value context = Value::empty_map();
};

// Flat-view field resolution; nullptr encodes absent.
const Value* resolve_field(const Intent& intent, const Value& context, std::string_view field_path);

bool evaluate_predicate(const Predicate& p, const Intent& intent, const Value& context);

// The governance interpreter: total over valid inputs, pure, and
// deterministic. Combination precedence: deny > escalate > allow >
// default_decision.
GovernanceOutcome decide(const PolicySet& policy, const Intent& intent, const Value& context);

}  // namespace idc
