#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idc/core/record.hpp"
#include "idc/effects/registry.hpp"
#include "idc/lang/ast.hpp"
#include "idc/ledger/ledger.hpp"
#include "idc/policy/policy.hpp"
#include "idc/runtime/eval.hpp"

namespace idc::runtime {

struct RuntimeLimits {
  std::uint64_t step_budget = kDefaultStepBudget;
  // Context snapshots above this canonical-byte size are reduced to a
  // content hash plus the fields the ask actually references.
  std::size_t context_snapshot_bytes = 64 * 1024;
};

enum class RunStatus { completed, denied_halt, suspended, runtime_error };

std::string_view run_status_name(RunStatus s);

struct TraceEntry {
  Intent intent;
  Decision decision = Decision::deny;
  std::uint64_t record_seq = 0;
};

struct EscalationTicket {
  std::string ticket_id;  // derived from the escalation record hash
  std::uint64_t record_seq = 0;
  Intent intent;
  std::string resume_state;  // self-contained JSON configuration snapshot
};

struct RunResult {
  RunStatus status = RunStatus::completed;
  Value final_env = Value::empty_map();
  std::vector<TraceEntry> trace;  // one entry per mediated ask
  std::optional<EscalationTicket> suspension;
  std::string error_step;
  std::string error_message;
};

// ⟨e, P, L⟩ plus the capability stack and limits. `context` accumulates
// the initial run context and prior step bindings.
struct Configuration {
  lang::ProgramAst program;
  std::size_t step_index = 0;
  Value context = Value::empty_map();
  PolicySet policy;
  std::vector<std::vector<std::string>> capability_stack;
  RuntimeLimits limits;
};

// --- capability algebra (prefix sets) ---
bool capability_matches(std::string_view capability, std::string_view action);
bool capability_set_allows(const std::vector<std::string>& set, std::string_view action);
// an action is allowed iff every level of the stack admits it
bool capabilities_allow(const std::vector<std::vector<std::string>>& stack,
                        std::string_view action);
// {longer of (a, b) : a ∈ A, b ∈ B, one a prefix of the other}, deduped
std::vector<std::string> intersect_capabilities(const std::vector<std::string>& a,
                                                const std::vector<std::string>& b);
std::vector<std::string> effective_capabilities(
    const std::vector<std::vector<std::string>>& stack);

// --- mediation (the single effect-realization call site lives behind this) ---
struct MediationOutcome {
  enum class Kind { realized, denied, suspended, aborted };
  Kind kind = Kind::aborted;
  Value value = Value::unit();  // realized value or denial value
  Intent intent;
  Decision decision = Decision::deny;
  std::uint64_t record_seq = 0;
  std::optional<EscalationTicket> ticket;
  std::string error_message;  // aborted only (e.g. ledger io-failure)
};

MediationOutcome mediate_and_realize(const lang::AskStep& step, Configuration& config,
                                     Ledger& ledger, EffectRegistry& effects);

// Escalation-resolution realization; appends the resolution record first.
// Returns the realized value (or an error value) plus the record seq.
std::pair<Value, std::uint64_t> realize_resolved_escalation(const Intent& intent,
                                                            const std::string& ticket_id,
                                                            const std::string& policy_id,
                                                            Ledger& ledger,
                                                            EffectRegistry& effects);

// --- execution ---
RunResult run_configuration(Configuration config, Ledger& ledger, EffectRegistry& effects);

RunResult run_program(const lang::ProgramAst& program, const PolicySet& policy,
                      const Value& initial_context, Ledger& ledger, EffectRegistry& effects,
                      const RuntimeLimits& limits = {});

// Composition: the child's asks are mediated against the same policy with
// the capability stack narrowed by intersection; never widened.
RunResult call_machine_as_subprogram(const Configuration& parent, const lang::ProgramAst& child,
                                     const Value& child_context, Ledger& ledger,
                                     EffectRegistry& effects);

// Derives an action path from a machine id when the registry has no entry
// ("@stdlib/email/send" -> "email.send").
std::string derive_action_path(std::string_view machine_id);

// Builds the evaluation environment for a context map: every binding at
// top level plus the "context" entry.
Value build_env(const Value& context);

}  // namespace idc::runtime
