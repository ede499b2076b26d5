#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idc/ledger/ledger.hpp"
#include "idc/policy/policy.hpp"

namespace idc::bench {

// The documented bench seed. (A hex pun on the project name doesn't
// survive contact with a hex parser, so the digits are 0x1DC1.)
inline constexpr std::uint64_t kBenchSeed = 0x1DC1;

struct BenchRow {
  std::string name;
  double p50_us = 0;
  double p95_us = 0;
  double p99_us = 0;
  double mean_us = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::uint64_t iterations = 0;
  std::uint64_t warmup = 0;
  std::string durability;
  std::vector<std::size_t> rule_counts;
  std::string os;
  std::string cpu;
  std::uint64_t seed = kBenchSeed;

  const BenchRow* find_row(const std::string& name) const;
};

struct BenchOptions {
  std::vector<std::size_t> rule_counts{5, 10, 20};
  std::uint64_t iterations = 10'000;
  std::uint64_t warmup = 1'000;
  Durability durability = Durability::durable;
  std::string scratch_dir;  // where append benchmarks place their ledger files
};

// Rule mix at count n: n/3 string-prefix rules, n/3 set-membership rules
// (8 strings each), remainder numeric comparisons.
PolicySet make_bench_policy(std::size_t rule_count, std::uint64_t seed = kBenchSeed);

// Measures, per run: decide() at each rule count, chain_hash on a
// representative sealed record, one ledger append, and the end-to-end
// mediation path (decide + seal + append). Row names:
//   policy-eval(N), hash(sha256), append(fast|durable), total-governance
BenchReport run_bench(const BenchOptions& options);

std::string report_to_json_text(const BenchReport& report);
std::string report_to_table_text(const BenchReport& report);

// Nearest-rank percentile over an unsorted sample set (p in [0,100]).
double percentile_us(std::vector<double> samples, double p);

}  // namespace idc::bench
