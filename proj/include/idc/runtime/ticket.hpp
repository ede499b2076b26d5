#pragma once

#include <string>

#include "idc/runtime/run.hpp"

namespace idc::runtime {

enum class TicketErrorKind { unknown_ticket, already_resolved, malformed };

class TicketError : public std::runtime_error {
public:
  TicketError(TicketErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  TicketErrorKind kind() const { return kind_; }

private:
  TicketErrorKind kind_;
};

// Self-contained JSON snapshot of a suspended configuration: program
// source, step index, context, policy, capability stack, pending intent.
std::string serialize_ticket_state(const Configuration& config, const EscalationTicket& ticket,
                                   const std::string& step_name);

// Writes <ledger-dir>/<ticket_id>.idticket beside the ledger file.
void persist_ticket(const EscalationTicket& ticket, const std::string& ledger_path);

std::string ticket_path_for(const std::string& ledger_path, const std::string& ticket_id);

// Applies a human decision to a suspended run. Allow realizes the pending
// intent (recording the resolution first) and continues the remaining
// steps against the same ledger; Deny halts. Tickets resolve exactly once.
RunResult resume(const EscalationTicket& ticket, Decision human_decision, Ledger& ledger,
                 EffectRegistry& effects);

// File-backed variant: loads the ticket, resolves it, and marks the file.
RunResult resume_from_file(const std::string& ticket_path, Decision human_decision,
                           Ledger& ledger, EffectRegistry& effects);

}  // namespace idc::runtime
