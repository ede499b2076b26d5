#include "idc/runtime/ticket.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "idc/core/canonical.hpp"
#include "idc/lang/parse.hpp"
#include "idc/policy/policy_io.hpp"

namespace idc::runtime {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json value_to_json(const Value& v) { return json::parse(canonical_serialize(v)); }

json intent_to_json(const Intent& intent) { return json::parse(canonical_serialize(intent)); }

Intent intent_from_json(const json& j) {
  Intent intent;
  intent.action = j.at("action").get<std::string>();
  intent.target = j.at("target").get<std::string>();
  intent.params = value_from_json_text(j.at("params").dump());
  intent.context = value_from_json_text(j.at("context").dump());
  validate_intent(intent);
  return intent;
}

struct TicketState {
  std::string ticket_id;
  std::uint64_t record_seq = 0;
  std::string step_name;
  std::string program_source;
  std::size_t step_index = 0;
  Value context = Value::empty_map();
  PolicySet policy;
  std::vector<std::vector<std::string>> capability_stack;
  Intent intent;
  bool resolved = false;
  std::string resolution;
};

TicketState parse_state(const std::string& text) {
  TicketState state;
  json j;
  try {
    j = json::parse(text);
    state.ticket_id = j.at("ticket_id").get<std::string>();
    state.record_seq = j.at("record_seq").get<std::uint64_t>();
    state.step_name = j.at("step_name").get<std::string>();
    state.program_source = j.at("program").get<std::string>();
    state.step_index = j.at("step_index").get<std::size_t>();
    state.context = value_from_json_text(j.at("context").dump());
    state.policy = policy_from_json_text(j.at("policy").dump());
    state.capability_stack =
        j.at("capability_stack").get<std::vector<std::vector<std::string>>>();
    state.intent = intent_from_json(j.at("intent"));
    state.resolved = j.at("resolved").get<bool>();
    state.resolution = j.value("resolution", "");
  } catch (const std::exception& e) {
    throw TicketError(TicketErrorKind::malformed, std::string("malformed ticket: ") + e.what());
  }
  return state;
}

std::string dump_state(const TicketState& state) {
  json j;
  j["ticket_id"] = state.ticket_id;
  j["record_seq"] = state.record_seq;
  j["step_name"] = state.step_name;
  j["program"] = state.program_source;
  j["step_index"] = state.step_index;
  j["context"] = value_to_json(state.context);
  j["policy"] = json::parse(policy_to_json_text(state.policy));
  j["capability_stack"] = state.capability_stack;
  j["intent"] = intent_to_json(state.intent);
  j["resolved"] = state.resolved;
  j["resolution"] = state.resolution;
  return j.dump(2);
}

bool ledger_has_resolution(const Ledger& ledger, const std::string& ticket_id) {
  const std::string rule = std::string(kEscalationResolutionPrefix) + ticket_id;
  for (const LedgerEntry& entry : ledger.entries()) {
    const auto* record = std::get_if<DecisionRecord>(&entry);
    if (!record) continue;
    for (const std::string& id : record->applied_rules)
      if (id == rule) return true;
  }
  return false;
}

}  // namespace

std::string serialize_ticket_state(const Configuration& config, const EscalationTicket& ticket,
                                   const std::string& step_name) {
  TicketState state;
  state.ticket_id = ticket.ticket_id;
  state.record_seq = ticket.record_seq;
  state.step_name = step_name;
  state.program_source = lang::unparse(config.program);
  state.step_index = config.step_index;
  state.context = config.context;
  state.policy = config.policy;
  state.capability_stack = config.capability_stack;
  state.intent = ticket.intent;
  return dump_state(state);
}

std::string ticket_path_for(const std::string& ledger_path, const std::string& ticket_id) {
  const fs::path dir = fs::path(ledger_path).parent_path();
  return (dir / (ticket_id + ".idticket")).string();
}

void persist_ticket(const EscalationTicket& ticket, const std::string& ledger_path) {
  const std::string path = ticket_path_for(ledger_path, ticket.ticket_id);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LedgerError("io-failure: cannot write ticket " + path);
  out << ticket.resume_state << "\n";
  if (!out.flush()) throw LedgerError("io-failure: ticket write failed");
}

RunResult resume(const EscalationTicket& ticket, Decision human_decision, Ledger& ledger,
                 EffectRegistry& effects) {
  if (human_decision == Decision::escalate)
    throw TicketError(TicketErrorKind::malformed, "a resolution must be allow or deny");
  TicketState state = parse_state(ticket.resume_state);
  if (state.resolved || ledger_has_resolution(ledger, state.ticket_id))
    throw TicketError(TicketErrorKind::already_resolved,
                      "ticket " + state.ticket_id + " is already resolved");

  lang::ParseResult parsed = lang::parse(state.program_source);
  if (!parsed.ok())
    throw TicketError(TicketErrorKind::malformed,
                      "ticket program does not parse: " + parsed.error->to_string());

  Configuration config;
  config.program = std::move(*parsed.ast);
  config.context = state.context;
  config.policy = state.policy;
  config.capability_stack = state.capability_stack;
  config.step_index = state.step_index;

  RunResult result;
  if (human_decision == Decision::deny) {
    const DecisionRecord record = ledger.append(
        AppendRequest{state.intent,
                      Decision::deny,
                      {std::string(kEscalationResolutionPrefix) + state.ticket_id},
                      state.policy.policy_id,
                      state.intent.context,
                      now_us()});
    result.status = RunStatus::denied_halt;
    result.trace.push_back(TraceEntry{state.intent, Decision::deny, record.seq});
    result.final_env = config.context;
    return result;
  }

  auto [value, seq] = realize_resolved_escalation(state.intent, state.ticket_id,
                                                  state.policy.policy_id, ledger, effects);
  config.context.set(state.step_name, std::move(value));
  config.step_index = state.step_index + 1;
  RunResult rest = run_configuration(std::move(config), ledger, effects);
  rest.trace.insert(rest.trace.begin(), TraceEntry{state.intent, Decision::allow, seq});
  return rest;
}

RunResult resume_from_file(const std::string& ticket_path, Decision human_decision,
                           Ledger& ledger, EffectRegistry& effects) {
  std::ifstream in(ticket_path, std::ios::binary);
  if (!in)
    throw TicketError(TicketErrorKind::unknown_ticket, "no such ticket: " + ticket_path);
  std::ostringstream buf;
  buf << in.rdbuf();

  TicketState state = parse_state(buf.str());
  EscalationTicket ticket;
  ticket.ticket_id = state.ticket_id;
  ticket.record_seq = state.record_seq;
  ticket.intent = state.intent;
  ticket.resume_state = buf.str();

  RunResult result = resume(ticket, human_decision, ledger, effects);

  state.resolved = true;
  state.resolution = std::string(decision_name(human_decision));
  std::ofstream out(ticket_path, std::ios::binary | std::ios::trunc);
  if (out) out << dump_state(state) << "\n";
  return result;
}

}  // namespace idc::runtime
