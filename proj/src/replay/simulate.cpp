#include "idc/replay/simulate.hpp"

#include <json.hpp>

namespace idc::replay {

namespace {

std::size_t index_of(Decision d) { return static_cast<std::size_t>(d); }

bool has_reserved_rule(const DecisionRecord& record) {
  for (const std::string& id : record.applied_rules)
    if (is_reserved_rule_id(id)) return true;
  return false;
}

}  // namespace

std::uint64_t SimulationReport::flips() const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < kDecisionCount; ++i)
    for (std::size_t j = 0; j < kDecisionCount; ++j)
      if (i != j) n += matrix[i][j];
  return n;
}

std::uint64_t SimulationReport::cell(Decision from, Decision to) const {
  return matrix[index_of(from)][index_of(to)];
}

SimulationReport simulate(const PolicySet& new_policy, const std::vector<LedgerEntry>& stream) {
  SimulationReport report;
  for (const LedgerEntry& entry : stream) {
    const auto* record = std::get_if<DecisionRecord>(&entry);
    if (!record) {
      ++report.markers_skipped;
      continue;
    }
    if (has_reserved_rule(*record)) ++report.reserved_rule_records;

    const GovernanceOutcome outcome = decide(new_policy, record->intent, record->context);
    ++report.total;
    ++report.matrix[index_of(record->decision)][index_of(outcome.decision)];
    if (outcome.decision != record->decision) {
      if (report.flipped_records.size() < kFlipListCap) {
        report.flipped_records.push_back(FlippedRecord{record->seq, record->decision,
                                                       outcome.decision, outcome.applied_rules});
      } else {
        ++report.flipped_truncated;
      }
    }
  }
  return report;
}

FlipMatrix diff_decisions(const std::vector<Decision>& old_decisions,
                          const std::vector<Decision>& new_decisions) {
  if (old_decisions.size() != new_decisions.size())
    throw ReplayError("length-mismatch: " + std::to_string(old_decisions.size()) + " vs " +
                      std::to_string(new_decisions.size()));
  FlipMatrix matrix{};
  for (std::size_t i = 0; i < old_decisions.size(); ++i)
    ++matrix[index_of(old_decisions[i])][index_of(new_decisions[i])];
  return matrix;
}

SimulationReport merge(const SimulationReport& a, const SimulationReport& b) {
  SimulationReport out = a;
  out.total += b.total;
  for (std::size_t i = 0; i < kDecisionCount; ++i)
    for (std::size_t j = 0; j < kDecisionCount; ++j) out.matrix[i][j] += b.matrix[i][j];
  for (const FlippedRecord& f : b.flipped_records) {
    if (out.flipped_records.size() < kFlipListCap)
      out.flipped_records.push_back(f);
    else
      ++out.flipped_truncated;
  }
  out.flipped_truncated += b.flipped_truncated;
  out.reserved_rule_records += b.reserved_rule_records;
  out.markers_skipped += b.markers_skipped;
  return out;
}

std::string report_to_json_text(const SimulationReport& report) {
  nlohmann::json j;
  j["total"] = report.total;
  j["flips"] = report.flips();
  nlohmann::json matrix = nlohmann::json::object();
  static constexpr Decision all[] = {Decision::allow, Decision::deny, Decision::escalate};
  for (Decision from : all) {
    for (Decision to : all) {
      const std::string key =
          std::string(decision_name(from)) + "->" + std::string(decision_name(to));
      matrix[key] = report.cell(from, to);
    }
  }
  j["matrix"] = std::move(matrix);
  nlohmann::json flipped = nlohmann::json::array();
  for (const FlippedRecord& f : report.flipped_records) {
    nlohmann::json fj;
    fj["seq"] = f.seq;
    fj["old"] = std::string(decision_name(f.old_decision));
    fj["new"] = std::string(decision_name(f.new_decision));
    fj["new_applied_rules"] = f.new_applied_rules;
    flipped.push_back(std::move(fj));
  }
  j["flipped_records"] = std::move(flipped);
  j["flipped_truncated"] = report.flipped_truncated;
  j["reserved_rule_records"] = report.reserved_rule_records;
  j["markers_skipped"] = report.markers_skipped;
  return j.dump(2);
}

std::string report_to_table_text(const SimulationReport& report) {
  static constexpr Decision all[] = {Decision::allow, Decision::deny, Decision::escalate};
  std::string out;
  out += "simulated records: " + std::to_string(report.total) +
         "  flips: " + std::to_string(report.flips()) + "\n";
  out += "  old\\new     allow      deny  escalate\n";
  for (Decision from : all) {
    std::string row = std::string(decision_name(from));
    row.insert(0, 10 - row.size(), ' ');
    for (Decision to : all) {
      std::string cell = std::to_string(report.cell(from, to));
      cell.insert(0, 10 - cell.size(), ' ');
      row += cell;
    }
    out += row + "\n";
  }
  if (report.markers_skipped)
    out += "markers skipped: " + std::to_string(report.markers_skipped) + "\n";
  if (report.reserved_rule_records)
    out += "records with reserved rule ids (capability-miss/escalation-resolution): " +
           std::to_string(report.reserved_rule_records) + "\n";
  return out;
}

}  // namespace idc::replay
