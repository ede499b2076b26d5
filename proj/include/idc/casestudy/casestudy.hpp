#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "idc/replay/simulate.hpp"
#include "idc/runtime/run.hpp"

namespace idc::casestudy {

struct RefundRequest {
  std::string request_id;
  std::string customer_id;
  std::int64_t amount_cents = 0;
  std::string region;
  std::string reason;
};

// Amount bands (cents): within limit (..50000], flip band (50000..100000],
// above both limits (100000..500000], escalation (500000..2000000]. The
// first requests are pinned one-per-band so every band is populated for
// any seed at count >= 4; one unauthorized-region request is pinned
// whenever the fraction is nonzero.
struct WorkloadSpec {
  std::uint64_t seed = 42;
  std::size_t count = 200;
  std::array<std::uint32_t, 4> band_weights{45, 20, 20, 15};
  double unauthorized_fraction = 0.10;
};

std::vector<RefundRequest> generate_workload(const WorkloadSpec& spec);

inline constexpr std::int64_t kDefaultLimitCents = 50'000;        // $500
inline constexpr std::int64_t kRaisedLimitCents = 100'000;        // $1000
inline constexpr std::int64_t kEscalationCents = 500'000;         // $5000
inline const std::vector<std::string> kAuthorizedRegions = {"eu-west", "us-east"};
inline const std::vector<std::string> kUnauthorizedRegions = {"ap-south", "cn-north"};

// Deny-overrides policy with: unauthorized-region deny (kv.get carrying a
// region param), a bounded refund-limit deny (limit < amount <=
// escalation bound), an above-bound escalate, and per-namespace allows
// over a fail-closed default.
PolicySet refund_policy(std::int64_t limit_cents, std::string policy_id,
                        std::int64_t escalation_cents = kEscalationCents);

// The refund agent: crm read (kv.get), policy read (kv.get),
// payment.refund, email.send; four asks per fully allowed request.
const std::string& refund_program_source();

struct CaseCounts {
  std::uint64_t allowed = 0;
  std::uint64_t denied = 0;
  std::uint64_t escalated = 0;
  std::uint64_t records = 0;

  bool operator==(const CaseCounts&) const = default;
};

struct CaseReport {
  std::uint64_t requests = 0;
  CaseCounts run;                          // live run under policy_a
  replay::FlipMatrix matrix{};             // simulate(policy_b) over the ledger
  std::uint64_t deny_to_allow_flips = 0;
  std::uint64_t escalate_stable = 0;       // escalate->escalate cell
  CaseCounts oracle_run;
  std::uint64_t oracle_deny_to_allow = 0;
  std::uint64_t oracle_escalated = 0;
  bool matches_oracle = false;
};

// Runs the workload under policy_a against a fresh ledger, simulates
// policy_b over the recorded stream, and cross-checks every number
// against the direct oracle. `ledger` must be empty.
CaseReport run_case_study(const WorkloadSpec& spec, const PolicySet& policy_a,
                          const PolicySet& policy_b, Ledger& ledger,
                          EffectRegistry& effects);

// Direct classification of the workload from the policy constants alone;
// no parsing, no evaluator, no ledger.
CaseCounts oracle_classify(const std::vector<RefundRequest>& requests, std::int64_t limit_cents,
                           std::int64_t escalation_cents);
std::uint64_t oracle_deny_to_allow_flips(const std::vector<RefundRequest>& requests,
                                         std::int64_t old_limit, std::int64_t new_limit,
                                         std::int64_t escalation_cents);

std::string case_report_to_json_text(const CaseReport& report);

}  // namespace idc::casestudy
