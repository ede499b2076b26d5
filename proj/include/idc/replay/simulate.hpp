#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "idc/core/record.hpp"
#include "idc/policy/policy.hpp"

namespace idc::replay {

// Ordered (old -> new) decision-pair counts; indices are the Decision
// enum values.
using FlipMatrix = std::array<std::array<std::uint64_t, kDecisionCount>, kDecisionCount>;

struct FlippedRecord {
  std::uint64_t seq = 0;
  Decision old_decision = Decision::deny;
  Decision new_decision = Decision::deny;
  std::vector<std::string> new_applied_rules;
};

struct SimulationReport {
  std::uint64_t total = 0;  // decision records simulated
  FlipMatrix matrix{};
  std::vector<FlippedRecord> flipped_records;
  std::uint64_t flipped_truncated = 0;  // flips beyond the listing cap
  // records replayed although their original decision was produced
  // outside decide() (capability-miss, escalation resolutions)
  std::uint64_t reserved_rule_records = 0;
  std::uint64_t markers_skipped = 0;

  std::uint64_t flips() const;
  std::uint64_t cell(Decision from, Decision to) const;
};

inline constexpr std::size_t kFlipListCap = 10'000;

// Re-decides every recorded intent under `new_policy` using the recorded
// context snapshots. No program re-execution, no effect realization.
SimulationReport simulate(const PolicySet& new_policy, const std::vector<LedgerEntry>& stream);

class ReplayError : public std::runtime_error {
public:
  explicit ReplayError(const std::string& msg) : std::runtime_error(msg) {}
};

// Pairwise flip matrix of two equal-length decision sequences; throws
// ReplayError on length mismatch.
FlipMatrix diff_decisions(const std::vector<Decision>& old_decisions,
                          const std::vector<Decision>& new_decisions);

// Matrices merge by cell-wise addition (workers may partition a stream).
SimulationReport merge(const SimulationReport& a, const SimulationReport& b);

std::string report_to_json_text(const SimulationReport& report);
std::string report_to_table_text(const SimulationReport& report);

}  // namespace idc::replay
