#include "idc/bench/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include <json.hpp>

#include "idc/core/hash.hpp"

namespace idc::bench {

namespace fs = std::filesystem;

const BenchRow* BenchReport::find_row(const std::string& name) const {
  for (const BenchRow& row : rows)
    if (row.name == name) return &row;
  return nullptr;
}

PolicySet make_bench_policy(std::size_t rule_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  static const std::vector<std::string> prefixes = {"email.", "payment.", "kv.",
                                                    "file.",  "http.",    "crm."};
  static const std::vector<std::string> fields = {"action", "target", "params.amount",
                                                  "params.region", "context.region"};

  PolicySet policy;
  policy.policy_id = "bench-" + std::to_string(rule_count);
  policy.default_decision = Decision::allow;
  const std::size_t n_prefix = rule_count / 3;
  const std::size_t n_set = rule_count / 3;
  for (std::size_t i = 0; i < rule_count; ++i) {
    PolicyRule rule;
    rule.id = "bench-r" + std::to_string(i);
    // deny rules would short-circuit nothing (decide collects all
    // matches), but keep them rare so the measured workload is allow-heavy
    rule.effect = i % 7 == 3 ? Decision::deny : Decision::allow;
    if (i < n_prefix) {
      rule.predicate = Predicate::string_prefix(
          "action", prefixes[static_cast<std::size_t>(pick(0, 5))]);
    } else if (i < n_prefix + n_set) {
      std::vector<std::string> allowed;
      for (int k = 0; k < 8; ++k)
        allowed.push_back("member-" + std::to_string(pick(0, 9999)));
      allowed.push_back("us-east");
      rule.predicate = Predicate::set_member(
          fields[static_cast<std::size_t>(pick(2, 4))], std::move(allowed));
    } else {
      static constexpr CmpOp ops[] = {CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge};
      rule.predicate = Predicate::numeric_cmp(
          "params.amount", ops[static_cast<std::size_t>(pick(0, 3))], pick(0, 100000));
    }
    policy.rules.push_back(std::move(rule));
  }
  validate_policy(policy);
  return policy;
}

double percentile_us(std::vector<double> samples, double p) {
  if (samples.empty()) return 0;
  std::sort(samples.begin(), samples.end());
  const double rank = (p / 100.0) * static_cast<double>(samples.size() - 1);
  const std::size_t idx = static_cast<std::size_t>(std::llround(rank));
  return samples[std::min(idx, samples.size() - 1)];
}

namespace {

std::vector<Intent> make_intent_pool(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xA5A5);
  auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  static const std::vector<std::string> actions = {"email.send", "payment.refund", "kv.get",
                                                   "file.write", "http.get"};
  std::vector<Intent> pool;
  for (int i = 0; i < 256; ++i) {
    Intent intent;
    intent.action = actions[static_cast<std::size_t>(pick(0, 4))];
    intent.target = "@stdlib/" + intent.action;
    intent.params = Value::map({{"amount", Value::integer(pick(0, 120000))},
                                {"region", Value::string(i % 3 ? "us-east" : "ap-south")},
                                {"to", Value::string("bench@example.test")}});
    intent.context = Value::map({{"region", Value::string("us-east")},
                                 {"id", Value::integer(i)}});
    pool.push_back(std::move(intent));
  }
  return pool;
}

BenchRow measure(const std::string& name, std::uint64_t warmup, std::uint64_t iterations,
                 const std::function<void(std::uint64_t)>& op) {
  using clock = std::chrono::steady_clock;
  for (std::uint64_t i = 0; i < warmup; ++i) op(i);
  std::vector<double> samples;
  samples.reserve(iterations);
  double sum = 0;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const auto t0 = clock::now();
    op(warmup + i);
    const auto t1 = clock::now();
    const double us =
        std::chrono::duration_cast<std::chrono::duration<double, std::micro>>(t1 - t0).count();
    samples.push_back(us);
    sum += us;
  }
  BenchRow row;
  row.name = name;
  row.mean_us = sum / static_cast<double>(iterations);
  row.p50_us = percentile_us(samples, 50);
  row.p95_us = percentile_us(samples, 95);
  row.p99_us = percentile_us(samples, 99);
  return row;
}

AppendRequest bench_request(const Intent& intent, std::int64_t ts) {
  AppendRequest req;
  req.intent = intent;
  req.decision = Decision::allow;
  req.applied_rules = {"bench-r0"};
  req.policy_id = "bench";
  req.context = intent.context;
  req.timestamp_us = ts;
  return req;
}

std::string host_os() {
  utsname u{};
  if (uname(&u) != 0) return "unknown";
  return std::string(u.sysname) + " " + u.release + " " + u.machine;
}

std::string host_cpu() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const std::size_t colon = line.find(':');
      if (colon != std::string::npos) {
        std::string name = line.substr(colon + 1);
        while (!name.empty() && name.front() == ' ') name.erase(name.begin());
        return name;
      }
    }
  }
  return "unknown";
}

}  // namespace

BenchReport run_bench(const BenchOptions& options) {
  BenchReport report;
  report.iterations = options.iterations;
  report.warmup = options.warmup;
  report.durability = options.durability == Durability::durable ? "durable" : "fast";
  report.rule_counts = options.rule_counts;
  report.os = host_os();
  report.cpu = host_cpu();

  const fs::path scratch = options.scratch_dir.empty()
                               ? fs::temp_directory_path() / "idc-bench"
                               : fs::path(options.scratch_dir);
  fs::create_directories(scratch);

  const std::vector<Intent> intents = make_intent_pool(kBenchSeed);
  const Value ctx = Value::map({{"region", Value::string("us-east")}});

  // policy evaluation at each rule count
  volatile std::uint64_t sink = 0;
  for (const std::size_t n : options.rule_counts) {
    const PolicySet policy = make_bench_policy(n);
    report.rows.push_back(measure(
        "policy-eval(" + std::to_string(n) + ")", options.warmup, options.iterations,
        [&](std::uint64_t i) {
          const GovernanceOutcome out = decide(policy, intents[i % intents.size()], ctx);
          sink += static_cast<std::uint64_t>(out.decision) + out.applied_rules.size();
        }));
  }

  // hash over a representative sealed-record payload
  {
    DecisionRecord record;
    record.seq = 17;
    record.timestamp_us = now_us();
    record.intent = intents[0];
    record.decision = Decision::allow;
    record.applied_rules = {"bench-r0", "bench-r7"};
    record.policy_id = "bench";
    record.context = intents[0].context;
    record.prev_hash = std::string(kGenesisHash);
    const std::string bytes = canonical_sans_hash(record);
    const std::string prev = std::string(kGenesisHash);
    report.rows.push_back(measure("hash(sha256)", options.warmup, options.iterations,
                                  [&](std::uint64_t) { sink += chain_hash(bytes, prev).size(); }));
  }

  // ledger append in the requested durability mode
  {
    const std::string path = (scratch / ("append-" + report.durability + ".idledger")).string();
    Ledger ledger = Ledger::create(path, options.durability);
    report.rows.push_back(measure(
        "append(" + report.durability + ")", options.warmup, options.iterations,
        [&](std::uint64_t i) {
          sink += ledger.append(bench_request(intents[i % intents.size()], now_us())).seq;
        }));
    ledger.close();
  }

  // end-to-end mediation path: decide + seal + append
  {
    const PolicySet policy = make_bench_policy(options.rule_counts.front());
    const std::string path = (scratch / "total.idledger").string();
    Ledger ledger = Ledger::create(path, options.durability);
    report.rows.push_back(measure(
        "total-governance", options.warmup, options.iterations, [&](std::uint64_t i) {
          const Intent& intent = intents[i % intents.size()];
          const GovernanceOutcome out = decide(policy, intent, ctx);
          const DecisionRecord record = ledger.append(AppendRequest{
              intent, out.decision, out.applied_rules, out.policy_id, out.context, now_us()});
          sink += record.seq;
        }));
    ledger.close();
  }

  (void)sink;
  return report;
}

std::string report_to_json_text(const BenchReport& report) {
  nlohmann::json j;
  j["iterations"] = report.iterations;
  j["warmup"] = report.warmup;
  j["durability"] = report.durability;
  j["rule_counts"] = report.rule_counts;
  j["os"] = report.os;
  j["cpu"] = report.cpu;
  j["seed"] = report.seed;
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& row : report.rows) {
    nlohmann::json rj;
    rj["name"] = row.name;
    rj["p50_us"] = row.p50_us;
    rj["p95_us"] = row.p95_us;
    rj["p99_us"] = row.p99_us;
    rj["mean_us"] = row.mean_us;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

std::string report_to_table_text(const BenchReport& report) {
  char buf[160];
  std::string out = "operation                     p50       p95       p99      mean  (µs)\n";
  for (const BenchRow& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-24s %9.2f %9.2f %9.2f %9.2f\n", row.name.c_str(),
                  row.p50_us, row.p95_us, row.p99_us, row.mean_us);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "iterations=%llu warmup=%llu durability=%s seed=0x%llx\n",
                static_cast<unsigned long long>(report.iterations),
                static_cast<unsigned long long>(report.warmup), report.durability.c_str(),
                static_cast<unsigned long long>(report.seed));
  out += buf;
  out += "host: " + report.os + " / " + report.cpu + "\n";
  return out;
}

}  // namespace idc::bench
