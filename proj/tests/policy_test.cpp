#include <doctest.h>

#include <chrono>

#include "idc/policy/oracle.hpp"
#include "idc/policy/policy_io.hpp"
#include "support/gen.hpp"

using namespace idc;

namespace {

Intent refund_intent(std::int64_t amount) {
  Intent intent;
  intent.action = "refund.issue";
  intent.target = "@stdlib/payment/refund";
  intent.params = Value::map({{"amount", Value::integer(amount)}});
  return intent;
}

PolicySet limit_policy(std::int64_t bound) {
  PolicySet policy;
  policy.policy_id = "refund-limits";
  policy.default_decision = Decision::allow;
  policy.rules.push_back(
      {"r1", Predicate::numeric_cmp("params.amount", CmpOp::gt, bound), Decision::deny});
  return policy;
}

}  // namespace

TEST_CASE("resolve_field addresses the flat intent view") {
  Intent intent;
  intent.action = "email.send";
  intent.target = "@stdlib/email/send";
  intent.params = Value::map({{"amount", Value::integer(600)},
                              {"user", Value::map({{"name", Value::string("ada")}})}});
  const Value ctx = Value::map({{"region", Value::string("us-east")}});

  const Value* v = resolve_field(intent, ctx, "action");
  REQUIRE(v);
  CHECK(v->as_string() == "email.send");
  v = resolve_field(intent, ctx, "params.amount");
  REQUIRE(v);
  CHECK(v->as_integer() == 600);
  v = resolve_field(intent, ctx, "params.user.name");
  REQUIRE(v);
  CHECK(v->as_string() == "ada");
  v = resolve_field(intent, ctx, "context.region");
  REQUIRE(v);
  CHECK(v->as_string() == "us-east");
  CHECK(resolve_field(intent, ctx, "params.missing") == nullptr);
  CHECK(resolve_field(intent, ctx, "params.amount.deeper") == nullptr);
  CHECK(resolve_field(intent, ctx, "bogus.path") == nullptr);
  CHECK(resolve_field(intent, ctx, "params.") == nullptr);
}

TEST_CASE("predicate evaluation basics") {
  Intent intent;
  intent.action = "email.send";
  intent.target = "@stdlib/email/send";
  const Value ctx = Value::empty_map();

  CHECK(evaluate_predicate(Predicate::string_prefix("action", "email."), intent, ctx));
  CHECK_FALSE(evaluate_predicate(Predicate::string_prefix("action", "payment."), intent, ctx));

  Intent refund = refund_intent(600);
  CHECK(evaluate_predicate(Predicate::numeric_cmp("params.amount", CmpOp::gt, 500), refund, ctx));
  // absent field evaluates false
  CHECK_FALSE(evaluate_predicate(Predicate::numeric_cmp("params.amount", CmpOp::gt, 500), intent, ctx));
  // type mismatch evaluates false
  Intent str_amount = refund;
  str_amount.params = Value::map({{"amount", Value::string("600")}});
  CHECK_FALSE(
      evaluate_predicate(Predicate::numeric_cmp("params.amount", CmpOp::gt, 500), str_amount, ctx));

  CHECK(evaluate_predicate(Predicate::negate(Predicate::always_true()), intent, ctx) == false);
  CHECK(evaluate_predicate(Predicate::all_of({}), intent, ctx));
  CHECK_FALSE(evaluate_predicate(Predicate::any_of({}), intent, ctx));
}

TEST_CASE("decide: refund limit example") {
  const PolicySet policy = limit_policy(500);
  const GovernanceOutcome out = decide(policy, refund_intent(600), Value::empty_map());
  CHECK(out.decision == Decision::deny);
  REQUIRE(out.applied_rules.size() == 1);
  CHECK(out.applied_rules[0] == "r1");

  const GovernanceOutcome ok = decide(policy, refund_intent(400), Value::empty_map());
  CHECK(ok.decision == Decision::allow);
  CHECK(ok.applied_rules.empty());
}

TEST_CASE("decide: empty rule list falls through to the default") {
  PolicySet policy;
  policy.policy_id = "empty";
  policy.default_decision = Decision::deny;
  const GovernanceOutcome out = decide(policy, refund_intent(1), Value::empty_map());
  CHECK(out.decision == Decision::deny);
  CHECK(out.applied_rules.empty());
}

TEST_CASE("decide: deny overrides a matching allow") {
  PolicySet policy;
  policy.policy_id = "both";
  policy.default_decision = Decision::escalate;
  policy.rules.push_back({"allow-all", Predicate::always_true(), Decision::allow});
  policy.rules.push_back({"deny-all", Predicate::always_true(), Decision::deny});
  const GovernanceOutcome out = decide(policy, refund_intent(5), Value::empty_map());
  CHECK(out.decision == Decision::deny);
  CHECK(out.applied_rules == std::vector<std::string>{"allow-all", "deny-all"});
}

TEST_CASE("decide: escalate outranks allow") {
  PolicySet policy;
  policy.policy_id = "esc";
  policy.default_decision = Decision::deny;
  policy.rules.push_back({"a", Predicate::always_true(), Decision::allow});
  policy.rules.push_back({"e", Predicate::always_true(), Decision::escalate});
  CHECK(decide(policy, refund_intent(5), Value::empty_map()).decision == Decision::escalate);
}

TEST_CASE("oracle_decide: single always_true escalate rule") {
  PolicySet policy;
  policy.policy_id = "esc-only";
  policy.default_decision = Decision::deny;
  policy.rules.push_back({"e", Predicate::always_true(), Decision::escalate});
  const GovernanceOutcome out = oracle_decide(policy, refund_intent(5), Value::empty_map());
  CHECK(out.decision == Decision::escalate);
  CHECK(out.applied_rules == std::vector<std::string>{"e"});
}

TEST_CASE("decide is deterministic") {
  testgen::Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const PolicySet policy = testgen::random_policy(rng);
    const Intent intent = testgen::random_intent(rng);
    const Value ctx = testgen::random_context(rng);
    const GovernanceOutcome a = decide(policy, intent, ctx);
    const GovernanceOutcome b = decide(policy, intent, ctx);
    CHECK(a.decision == b.decision);
    CHECK(a.applied_rules == b.applied_rules);
  }
}

TEST_CASE("decide agrees with oracle_decide: 5k differential sample") {
  testgen::Rng rng(1337);
  for (int i = 0; i < 5000; ++i) {
    const PolicySet policy = testgen::random_policy(rng);
    const Intent intent = testgen::random_intent(rng);
    const Value ctx = testgen::random_context(rng);
    const GovernanceOutcome a = decide(policy, intent, ctx);
    const GovernanceOutcome b = oracle_decide(policy, intent, ctx);
    REQUIRE(a.decision == b.decision);
    REQUIRE(a.applied_rules == b.applied_rules);
  }
}

TEST_CASE("deny-overrides dominance holds on random inputs") {
  testgen::Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const PolicySet policy = testgen::random_policy(rng);
    const Intent intent = testgen::random_intent(rng);
    const Value ctx = testgen::random_context(rng);
    const GovernanceOutcome out = decide(policy, intent, ctx);
    bool deny_matched = false;
    for (const PolicyRule& r : policy.rules) {
      if (r.effect == Decision::deny && evaluate_predicate(r.predicate, intent, ctx))
        deny_matched = true;
    }
    if (deny_matched) CHECK(out.decision == Decision::deny);
  }
}

TEST_CASE("raising a deny threshold never converts an allow into a deny") {
  testgen::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const std::int64_t b = testgen::pick_int(rng, -50, 900);
    const std::int64_t b2 = b + testgen::pick_int(rng, 1, 500);
    PolicySet low = limit_policy(b);
    PolicySet high = limit_policy(b2);
    const Intent intent = refund_intent(testgen::pick_int(rng, -100, 2000));
    const Value ctx = Value::empty_map();
    const Decision before = decide(low, intent, ctx).decision;
    const Decision after = decide(high, intent, ctx).decision;
    if (before == Decision::allow) CHECK(after == Decision::allow);
  }
}

TEST_CASE("predicate bounds are enforced") {
  Predicate deep = Predicate::always_true();
  for (int i = 0; i < 40; ++i) deep = Predicate::negate(std::move(deep));
  CHECK_THROWS_AS(validate_predicate(deep), PolicyError);

  std::vector<Predicate> wide(1025, Predicate::always_true());
  CHECK_THROWS_AS(validate_predicate(Predicate::all_of(std::move(wide))), PolicyError);

  PolicySet policy;
  policy.policy_id = "dup";
  policy.rules.push_back({"x", Predicate::always_true(), Decision::allow});
  policy.rules.push_back({"x", Predicate::always_true(), Decision::deny});
  CHECK_THROWS_AS(validate_policy(policy), PolicyError);

  PolicySet reserved;
  reserved.policy_id = "resv";
  reserved.rules.push_back({"capability-miss", Predicate::always_true(), Decision::deny});
  CHECK_THROWS_AS(validate_policy(reserved), PolicyError);
}

TEST_CASE("policy JSON round-trips and rejects unknown kinds") {
  const char* text = R"({
    "policy_id": "refund-limits",
    "default": "deny",
    "rules": [
      {"id": "limit", "effect": "deny", "predicate":
        {"kind": "all_of", "children": [
          {"kind": "string_prefix", "field": "action", "prefix": "payment."},
          {"kind": "numeric_cmp", "field": "params.amount", "op": ">", "bound": 50000},
          {"kind": "numeric_cmp", "field": "params.amount", "op": "<=", "bound": 500000}
        ]}},
      {"id": "region", "effect": "deny", "predicate":
        {"kind": "negate", "child": {"kind": "set_member", "field": "params.region",
                                     "allowed": ["us-east", "eu-west"]}}},
      {"id": "open", "effect": "allow", "predicate": {"kind": "always_true"}}
    ]
  })";
  const PolicySet policy = policy_from_json_text(text);
  CHECK(policy.policy_id == "refund-limits");
  CHECK(policy.default_decision == Decision::deny);
  REQUIRE(policy.rules.size() == 3);
  CHECK(policy.rules[0].predicate.kind == PredicateKind::all_of);

  const PolicySet back = policy_from_json_text(policy_to_json_text(policy));
  CHECK(back.policy_id == policy.policy_id);
  REQUIRE(back.rules.size() == policy.rules.size());
  // behavioral equivalence spot check
  testgen::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Intent intent = testgen::random_intent(rng);
    const Value ctx = testgen::random_context(rng);
    CHECK(decide(policy, intent, ctx).decision == decide(back, intent, ctx).decision);
  }

  CHECK_THROWS_AS(policy_from_json_text(R"({"policy_id":"x","default":"deny",
    "rules":[{"id":"a","effect":"deny","predicate":{"kind":"regex","field":"action"}}]})"),
                  PolicyError);
  CHECK_THROWS_AS(policy_from_json_text("{"), PolicyError);
  CHECK_THROWS_AS(policy_from_json_text(R"({"policy_id":"x","default":"maybe","rules":[]})"),
                  PolicyError);
}

TEST_CASE("decide terminates fast on bound-sized inputs") {
  testgen::Rng rng(2024);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) {
    const PolicySet policy = testgen::random_policy(rng, 16);
    const Intent intent = testgen::random_intent(rng);
    decide(policy, intent, testgen::random_context(rng));
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 10);
}
