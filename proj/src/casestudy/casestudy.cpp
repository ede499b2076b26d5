#include "idc/casestudy/casestudy.hpp"

#include <random>

#include <json.hpp>

#include "idc/lang/parse.hpp"

namespace idc::casestudy {

namespace {

bool region_unauthorized(const std::string& region) {
  for (const std::string& r : kUnauthorizedRegions)
    if (r == region) return true;
  return false;
}

std::int64_t amount_in_band(std::mt19937_64& rng, std::size_t band) {
  auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  switch (band) {
    case 0:
      return pick(100, kDefaultLimitCents);
    case 1:
      return pick(kDefaultLimitCents + 1, kRaisedLimitCents);
    case 2:
      return pick(kRaisedLimitCents + 1, kEscalationCents);
    default:
      return pick(kEscalationCents + 1, 2'000'000);
  }
}

}  // namespace

std::vector<RefundRequest> generate_workload(const WorkloadSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::discrete_distribution<std::size_t> band_dist(spec.band_weights.begin(),
                                                    spec.band_weights.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<RefundRequest> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    RefundRequest req;
    req.request_id = "rq-" + std::to_string(spec.seed) + "-" + std::to_string(i);
    req.customer_id = "cust-" + std::to_string(1000 + (i * 7919) % 400);

    // pin the first four requests to one band each; afterwards draw
    const std::size_t band = i < 4 ? i : band_dist(rng);
    req.amount_cents = amount_in_band(rng, band);

    const std::size_t pinned_unauthorized = spec.count > 4 ? 4 : 0;
    const bool unauthorized =
        spec.unauthorized_fraction > 0 &&
        (i == pinned_unauthorized || unit(rng) < spec.unauthorized_fraction);
    const auto& regions = unauthorized ? kUnauthorizedRegions : kAuthorizedRegions;
    req.region = regions[i % regions.size()];

    req.reason = (band == 0 ? "damaged goods" : band == 1 ? "late delivery"
                                            : band == 2   ? "order error"
                                                          : "bulk return");
    out.push_back(std::move(req));
  }
  return out;
}

PolicySet refund_policy(std::int64_t limit_cents, std::string policy_id,
                        std::int64_t escalation_cents) {
  PolicySet policy;
  policy.policy_id = std::move(policy_id);
  policy.default_decision = Decision::deny;

  policy.rules.push_back(
      {"unauthorized-region",
       Predicate::all_of({Predicate::string_prefix("action", "kv.get"),
                          Predicate::set_member("params.region", kUnauthorizedRegions)}),
       Decision::deny});
  policy.rules.push_back(
      {"refund-limit",
       Predicate::all_of({Predicate::string_prefix("action", "payment.refund"),
                          Predicate::numeric_cmp("params.amount_cents", CmpOp::gt, limit_cents),
                          Predicate::numeric_cmp("params.amount_cents", CmpOp::le,
                                                 escalation_cents)}),
       Decision::deny});
  policy.rules.push_back(
      {"refund-approval",
       Predicate::all_of({Predicate::string_prefix("action", "payment.refund"),
                          Predicate::numeric_cmp("params.amount_cents", CmpOp::gt,
                                                 escalation_cents)}),
       Decision::escalate});
  policy.rules.push_back({"allow-kv", Predicate::string_prefix("action", "kv."), Decision::allow});
  policy.rules.push_back(
      {"allow-payment", Predicate::string_prefix("action", "payment."), Decision::allow});
  policy.rules.push_back(
      {"allow-email", Predicate::string_prefix("action", "email."), Decision::allow});
  validate_policy(policy);
  return policy;
}

const std::string& refund_program_source() {
  static const std::string source = R"PROG(program refund_agent
  capabilities:
    kv.
    payment.
    email.
  step customer: ask {
    machine "@stdlib/kv/get"
    input {
      key: "customer:" + context.request.customer_id
      region: context.request.region
    }
  }
  step policy_doc: ask {
    machine "@stdlib/kv/get"
    input {
      key: "policy:refund"
    }
  }
  step refund: ask {
    machine "@stdlib/payment/refund"
    input {
      request_id: context.request.request_id
      customer_id: context.request.customer_id
      amount_cents: context.request.amount_cents
    }
  }
  step notify: ask {
    machine "@stdlib/email/send"
    input {
      to: context.request.customer_id + "@customers.example"
      subject: "Refund processed: " + context.request.request_id
      body: "Refunded " + str(context.request.amount_cents) + " cents (" + context.request.reason + ")"
    }
  }
)PROG";
  return source;
}

CaseCounts oracle_classify(const std::vector<RefundRequest>& requests, std::int64_t limit_cents,
                           std::int64_t escalation_cents) {
  CaseCounts counts;
  for (const RefundRequest& req : requests) {
    // ask 1: crm read carries the region
    if (region_unauthorized(req.region)) {
      ++counts.denied;
      ++counts.records;
      continue;  // denial halts the run
    }
    ++counts.allowed;
    ++counts.records;
    // ask 2: policy doc read, always allowed
    ++counts.allowed;
    ++counts.records;
    // ask 3: the refund itself
    if (req.amount_cents > escalation_cents) {
      ++counts.escalated;
      ++counts.records;
      continue;  // suspended
    }
    if (req.amount_cents > limit_cents) {
      ++counts.denied;
      ++counts.records;
      continue;  // denied, halts
    }
    ++counts.allowed;
    ++counts.records;
    // ask 4: notification
    ++counts.allowed;
    ++counts.records;
  }
  return counts;
}

std::uint64_t oracle_deny_to_allow_flips(const std::vector<RefundRequest>& requests,
                                         std::int64_t old_limit, std::int64_t new_limit,
                                         std::int64_t escalation_cents) {
  std::uint64_t flips = 0;
  for (const RefundRequest& req : requests) {
    if (region_unauthorized(req.region)) continue;  // never reaches the refund ask
    if (req.amount_cents > escalation_cents) continue;
    const bool denied_old = req.amount_cents > old_limit;
    const bool denied_new = req.amount_cents > new_limit;
    if (denied_old && !denied_new) ++flips;
  }
  return flips;
}

CaseReport run_case_study(const WorkloadSpec& spec, const PolicySet& policy_a,
                          const PolicySet& policy_b, Ledger& ledger, EffectRegistry& effects) {
  if (ledger.size() != 0) throw std::invalid_argument("case study needs an empty ledger");

  lang::ParseResult parsed = lang::parse(refund_program_source());
  if (!parsed.ok())
    throw std::runtime_error("refund program failed to parse: " + parsed.error->to_string());
  const lang::ProgramAst program = std::move(*parsed.ast);

  const std::vector<RefundRequest> workload = generate_workload(spec);

  // seed the mock CRM and policy document
  effects.kv_put("policy:refund", Value::map({{"limit_cents", Value::integer(kDefaultLimitCents)},
                                              {"title", Value::string("refund policy v1")}}));
  for (const RefundRequest& req : workload) {
    effects.kv_put("customer:" + req.customer_id,
                   Value::map({{"customer_id", Value::string(req.customer_id)},
                               {"region", Value::string(req.region)}}));
  }

  CaseReport report;
  report.requests = workload.size();
  for (const RefundRequest& req : workload) {
    const Value request_value = Value::map({
        {"request_id", Value::string(req.request_id)},
        {"customer_id", Value::string(req.customer_id)},
        {"amount_cents", Value::integer(req.amount_cents)},
        {"region", Value::string(req.region)},
        {"reason", Value::string(req.reason)},
    });
    const Value initial_context = Value::map({{"request", request_value}});
    const runtime::RunResult result =
        runtime::run_program(program, policy_a, initial_context, ledger, effects);
    if (result.status == runtime::RunStatus::runtime_error)
      throw std::runtime_error("case-study run failed at step " + result.error_step + ": " +
                               result.error_message);
    for (const runtime::TraceEntry& t : result.trace) {
      switch (t.decision) {
        case Decision::allow:
          ++report.run.allowed;
          break;
        case Decision::deny:
          ++report.run.denied;
          break;
        case Decision::escalate:
          ++report.run.escalated;
          break;
      }
    }
  }
  report.run.records = ledger.size();

  const replay::SimulationReport sim = replay::simulate(policy_b, ledger.entries());
  report.matrix = sim.matrix;
  report.deny_to_allow_flips = sim.cell(Decision::deny, Decision::allow);
  report.escalate_stable = sim.cell(Decision::escalate, Decision::escalate);

  report.oracle_run = oracle_classify(workload, kDefaultLimitCents, kEscalationCents);
  report.oracle_deny_to_allow = oracle_deny_to_allow_flips(workload, kDefaultLimitCents,
                                                           kRaisedLimitCents, kEscalationCents);
  report.oracle_escalated = report.oracle_run.escalated;

  report.matches_oracle = report.run == report.oracle_run &&
                          report.deny_to_allow_flips == report.oracle_deny_to_allow &&
                          report.escalate_stable == report.oracle_escalated;
  return report;
}

std::string case_report_to_json_text(const CaseReport& report) {
  nlohmann::json j;
  j["requests"] = report.requests;
  j["run"] = {{"allowed", report.run.allowed},
              {"denied", report.run.denied},
              {"escalated", report.run.escalated},
              {"records", report.run.records}};
  j["simulate"] = {{"deny_to_allow_flips", report.deny_to_allow_flips},
                   {"escalate_stable", report.escalate_stable}};
  j["oracle"] = {{"allowed", report.oracle_run.allowed},
                 {"denied", report.oracle_run.denied},
                 {"escalated", report.oracle_run.escalated},
                 {"records", report.oracle_run.records},
                 {"deny_to_allow_flips", report.oracle_deny_to_allow}};
  j["matches_oracle"] = report.matches_oracle;
  return j.dump(2);
}

}  // namespace idc::casestudy
