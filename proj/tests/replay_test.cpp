#include <doctest.h>

#include "idc/ledger/ledger.hpp"
#include "idc/replay/simulate.hpp"
#include "support/progen.hpp"

using namespace idc;
using namespace idc::replay;

namespace {

std::vector<LedgerEntry> record_stream(const PolicySet& policy, int n, testgen::Rng& rng) {
  Ledger ledger = Ledger::in_memory();
  for (int i = 0; i < n; ++i) {
    const Intent intent = testgen::random_intent(rng);
    const Value ctx = testgen::random_context(rng);
    const GovernanceOutcome out = decide(policy, intent, ctx);
    ledger.append(AppendRequest{intent, out.decision, out.applied_rules, out.policy_id,
                                out.context, 1754700000000000 + i});
  }
  return ledger.entries();
}

}  // namespace

TEST_CASE("identity: simulating the producing policy yields a diagonal matrix") {
  testgen::Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const PolicySet policy = testgen::random_policy(rng);
    const auto stream = record_stream(policy, 40, rng);
    const SimulationReport report = simulate(policy, stream);
    CHECK(report.total == 40);
    CHECK(report.flips() == 0);
    CHECK(report.flipped_records.empty());
    // diagonal sums to the total
    std::uint64_t diagonal = 0;
    for (Decision d : {Decision::allow, Decision::deny, Decision::escalate})
      diagonal += report.cell(d, d);
    CHECK(diagonal == report.total);
  }
}

TEST_CASE("simulate is idempotent") {
  testgen::Rng rng(22);
  const PolicySet old_policy = testgen::random_policy(rng);
  const PolicySet new_policy = testgen::random_policy(rng);
  const auto stream = record_stream(old_policy, 100, rng);
  const SimulationReport a = simulate(new_policy, stream);
  const SimulationReport b = simulate(new_policy, stream);
  CHECK(a.matrix == b.matrix);
  CHECK(a.total == b.total);
}

TEST_CASE("empty stream -> all-zero report") {
  const SimulationReport report = simulate(PolicySet{"empty", {}, Decision::deny}, {});
  CHECK(report.total == 0);
  CHECK(report.flips() == 0);
  for (std::size_t i = 0; i < kDecisionCount; ++i)
    for (std::size_t j = 0; j < kDecisionCount; ++j) CHECK(report.matrix[i][j] == 0);
}

TEST_CASE("limit-raise flips exactly the naive-oracle set") {
  testgen::Rng rng(23);
  auto limit_policy = [](std::int64_t bound) {
    PolicySet policy;
    policy.policy_id = "limit-" + std::to_string(bound);
    policy.default_decision = Decision::allow;
    policy.rules.push_back(
        {"limit", Predicate::numeric_cmp("params.amount", CmpOp::gt, bound), Decision::deny});
    return policy;
  };
  const PolicySet old_policy = limit_policy(500);
  const PolicySet new_policy = limit_policy(1000);

  Ledger ledger = Ledger::in_memory();
  std::vector<std::int64_t> amounts;
  for (int i = 0; i < 300; ++i) {
    Intent intent;
    intent.action = "payment.refund";
    intent.target = "@stdlib/payment/refund";
    const std::int64_t amount = testgen::pick_int(rng, 0, 2000);
    amounts.push_back(amount);
    intent.params = Value::map({{"amount", Value::integer(amount)}});
    const GovernanceOutcome out = decide(old_policy, intent, Value::empty_map());
    ledger.append(AppendRequest{intent, out.decision, out.applied_rules, out.policy_id,
                                out.context, i});
  }

  const SimulationReport report = simulate(new_policy, ledger.entries());
  // brute-force oracle over the raw amounts
  std::uint64_t expected_flips = 0;
  for (const std::int64_t a : amounts)
    if (a > 500 && a <= 1000) ++expected_flips;
  CHECK(report.cell(Decision::deny, Decision::allow) == expected_flips);
  CHECK(report.flips() == expected_flips);
  for (const FlippedRecord& f : report.flipped_records) {
    CHECK(f.old_decision == Decision::deny);
    CHECK(f.new_decision == Decision::allow);
    const std::int64_t a = amounts[f.seq];
    CHECK(a > 500);
    CHECK(a <= 1000);
  }
}

TEST_CASE("monotone relaxation at stream scale: no allow->deny flips") {
  testgen::Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t b = testgen::pick_int(rng, 0, 800);
    const std::int64_t b2 = b + testgen::pick_int(rng, 1, 800);
    PolicySet old_policy;
    old_policy.policy_id = "m";
    old_policy.default_decision = Decision::allow;
    old_policy.rules.push_back(
        {"limit", Predicate::numeric_cmp("params.amount", CmpOp::gt, b), Decision::deny});
    PolicySet new_policy = old_policy;
    new_policy.rules[0].predicate.bound = b2;

    const auto stream = record_stream(old_policy, 50, rng);
    const SimulationReport report = simulate(new_policy, stream);
    CHECK(report.cell(Decision::allow, Decision::deny) == 0);
  }
}

TEST_CASE("diff_decisions counts ordered pairs") {
  using D = Decision;
  const FlipMatrix m1 = diff_decisions({D::allow, D::deny}, {D::allow, D::allow});
  CHECK(m1[static_cast<int>(D::deny)][static_cast<int>(D::allow)] == 1);
  CHECK(m1[static_cast<int>(D::allow)][static_cast<int>(D::allow)] == 1);

  const FlipMatrix m2 = diff_decisions({D::escalate}, {D::deny});
  CHECK(m2[static_cast<int>(D::escalate)][static_cast<int>(D::deny)] == 1);

  const FlipMatrix m3 = diff_decisions({D::allow, D::escalate}, {D::allow, D::escalate});
  CHECK(m3[static_cast<int>(D::allow)][static_cast<int>(D::allow)] == 1);
  CHECK(m3[static_cast<int>(D::escalate)][static_cast<int>(D::escalate)] == 1);

  CHECK_THROWS_AS(diff_decisions({D::allow}, {}), ReplayError);
}

TEST_CASE("merge is cell-wise addition over a partition") {
  testgen::Rng rng(25);
  const PolicySet old_policy = testgen::random_policy(rng);
  const PolicySet new_policy = testgen::random_policy(rng);
  const auto stream = record_stream(old_policy, 120, rng);

  const SimulationReport whole = simulate(new_policy, stream);
  const std::vector<LedgerEntry> left(stream.begin(), stream.begin() + 60);
  const std::vector<LedgerEntry> right(stream.begin() + 60, stream.end());
  const SimulationReport merged = merge(simulate(new_policy, left), simulate(new_policy, right));
  CHECK(merged.matrix == whole.matrix);
  CHECK(merged.total == whole.total);
  CHECK(merged.flips() == whole.flips());
}

TEST_CASE("markers are skipped and reserved-rule records are flagged") {
  Ledger ledger = Ledger::in_memory();
  Intent intent;
  intent.action = "kv.put";
  intent.target = "@stdlib/kv/put";
  ledger.append(AppendRequest{intent, Decision::deny, {"capability-miss"}, "p", intent.context, 1});
  ledger.append_marker(intent, "handler-failure", "p", 2);
  ledger.append(AppendRequest{intent, Decision::allow, {"r1"}, "p", intent.context, 3});

  PolicySet policy;
  policy.policy_id = "p";
  policy.default_decision = Decision::allow;
  policy.rules.push_back({"r1", Predicate::always_true(), Decision::allow});
  const SimulationReport report = simulate(policy, ledger.entries());
  CHECK(report.total == 2);
  CHECK(report.markers_skipped == 1);
  CHECK(report.reserved_rule_records == 1);
  // the capability-miss deny re-decides to allow under the policy: flagged as a flip
  CHECK(report.cell(Decision::deny, Decision::allow) == 1);
}

TEST_CASE("flip listing truncates at the cap but keeps counting") {
  Ledger ledger = Ledger::in_memory();
  Intent intent;
  intent.action = "kv.put";
  intent.target = "@stdlib/kv/put";
  const std::size_t n = kFlipListCap + 25;
  for (std::size_t i = 0; i < n; ++i)
    ledger.append(AppendRequest{intent, Decision::deny, {}, "p", intent.context,
                                static_cast<std::int64_t>(i)});
  PolicySet allow_all;
  allow_all.policy_id = "p2";
  allow_all.default_decision = Decision::allow;
  const SimulationReport report = simulate(allow_all, ledger.entries());
  CHECK(report.flips() == n);
  CHECK(report.flipped_records.size() == kFlipListCap);
  CHECK(report.flipped_truncated == 25);
  // json emission stays consistent
  const std::string json = report_to_json_text(report);
  CHECK(json.find("\"flipped_truncated\": 25") != std::string::npos);
}
