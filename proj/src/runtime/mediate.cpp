#include <algorithm>

#include "idc/core/canonical.hpp"
#include "idc/core/hash.hpp"
#include "idc/runtime/run.hpp"
#include "idc/runtime/ticket.hpp"

namespace idc::runtime {

bool capability_matches(std::string_view capability, std::string_view action) {
  return !capability.empty() && action.substr(0, capability.size()) == capability;
}

bool capability_set_allows(const std::vector<std::string>& set, std::string_view action) {
  return std::any_of(set.begin(), set.end(),
                     [&](const std::string& cap) { return capability_matches(cap, action); });
}

bool capabilities_allow(const std::vector<std::vector<std::string>>& stack,
                        std::string_view action) {
  if (stack.empty()) return false;
  return std::all_of(stack.begin(), stack.end(), [&](const std::vector<std::string>& level) {
    return capability_set_allows(level, action);
  });
}

std::vector<std::string> intersect_capabilities(const std::vector<std::string>& a,
                                                const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (const std::string& x : a) {
    for (const std::string& y : b) {
      const std::string* keep = nullptr;
      if (capability_matches(x, y))
        keep = &y;  // x is a prefix of y; y is narrower
      else if (capability_matches(y, x))
        keep = &x;
      if (keep && std::find(out.begin(), out.end(), *keep) == out.end()) out.push_back(*keep);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> effective_capabilities(
    const std::vector<std::vector<std::string>>& stack) {
  if (stack.empty()) return {};
  std::vector<std::string> acc = stack.front();
  std::sort(acc.begin(), acc.end());
  for (std::size_t i = 1; i < stack.size(); ++i) acc = intersect_capabilities(acc, stack[i]);
  return acc;
}

std::string derive_action_path(std::string_view machine_id) {
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (start <= machine_id.size()) {
    std::size_t end = machine_id.find('/', start);
    if (end == std::string_view::npos) end = machine_id.size();
    if (end > start) segments.emplace_back(machine_id.substr(start, end - start));
    start = end + 1;
  }
  if (!segments.empty() && segments.front().front() == '@' && segments.size() > 1)
    segments.erase(segments.begin());
  std::string action;
  for (const std::string& s : segments) {
    if (!action.empty()) action += '.';
    action += s;
  }
  return action.empty() ? std::string(machine_id) : action;
}

Value build_env(const Value& context) {
  Value env = context;
  env.set("context", context);
  return env;
}

namespace {

// Top-level context keys an expression can observe: bare identifiers and
// context.<key> accesses (over-approximates under shadowing, which only
// widens the snapshot).
void collect_referenced_keys(const lang::Expr& e, std::vector<std::string>& out) {
  if (e.kind == lang::ExprKind::var && e.name != "context") out.push_back(e.name);
  if (e.kind == lang::ExprKind::field_access) {
    const lang::Expr& base = e.children[0];
    if (base.kind == lang::ExprKind::var && base.name == "context") out.push_back(e.name);
  }
  for (const lang::Expr& c : e.children) collect_referenced_keys(c, out);
}

Value snapshot_context(const Configuration& config, const lang::AskStep& step) {
  const std::string bytes = canonical_serialize(config.context);
  if (bytes.size() <= config.limits.context_snapshot_bytes) return config.context;

  Value snapshot = Value::empty_map();
  snapshot.set("__env_sha256", Value::string(sha256_hex(bytes)));
  std::vector<std::string> keys;
  for (const auto& [_, expr] : step.input_fields) collect_referenced_keys(expr, keys);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (const std::string& key : keys) {
    if (const Value* v = config.context.find(key)) snapshot.set(key, *v);
  }
  return snapshot;
}

Value denial_value(std::uint64_t record_seq) {
  Value v = Value::empty_map();
  v.set("denied", Value::boolean(true));
  v.set("record_seq", Value::integer(static_cast<std::int64_t>(record_seq)));
  return v;
}

Value effect_error_value(const EffectError& err) {
  Value v = Value::empty_map();
  v.set("error", Value::boolean(true));
  v.set("kind", Value::string(std::string(effect_error_kind_name(err.kind))));
  v.set("message", Value::string(err.message));
  return v;
}

}  // namespace

MediationOutcome mediate_and_realize(const lang::AskStep& step, Configuration& config,
                                     Ledger& ledger, EffectRegistry& effects) {
  MediationOutcome out;

  // 1-2. evaluate the input fields (pure, shared budget per ask) and
  // reify the intent; any failure here aborts before mediation
  try {
    const Value env = build_env(config.context);
    Value params = Value::empty_map();
    for (const auto& [key, expr] : step.input_fields)
      params.set(key, eval_expr(expr, env, config.limits.step_budget));
    const EffectMachine* machine = effects.find(step.machine);
    out.intent.action = machine ? machine->action_path : derive_action_path(step.machine);
    out.intent.target = step.machine;
    out.intent.params = std::move(params);
    out.intent.context = snapshot_context(config, step);
  } catch (const std::exception& e) {
    out.kind = MediationOutcome::Kind::aborted;
    out.error_message = e.what();
    return out;
  }

  const std::int64_t ts = now_us();

  // 3. capability gate, recorded like any decision
  if (!capabilities_allow(config.capability_stack, out.intent.action)) {
    AppendRequest req{out.intent,
                      Decision::deny,
                      {std::string(kCapabilityMissRuleId)},
                      config.policy.policy_id,
                      out.intent.context,
                      ts};
    try {
      const DecisionRecord record = ledger.append(req);
      out.kind = MediationOutcome::Kind::denied;
      out.decision = Decision::deny;
      out.record_seq = record.seq;
      out.value = denial_value(record.seq);
    } catch (const LedgerError& e) {
      out.kind = MediationOutcome::Kind::aborted;
      out.error_message = e.what();
    }
    return out;
  }

  // 4. decide, then append exactly one record before any effect
  const GovernanceOutcome outcome = decide(config.policy, out.intent, out.intent.context);
  DecisionRecord record;
  try {
    record = ledger.append(AppendRequest{out.intent, outcome.decision, outcome.applied_rules,
                                         outcome.policy_id, outcome.context, ts});
  } catch (const LedgerError& e) {
    // fail closed: no record, no effect
    out.kind = MediationOutcome::Kind::aborted;
    out.error_message = e.what();
    return out;
  }
  out.decision = outcome.decision;
  out.record_seq = record.seq;

  switch (outcome.decision) {
    case Decision::allow: {
      const RealizeResult realized = effects.realize(out.intent);
      if (const Value* value = std::get_if<Value>(&realized)) {
        out.kind = MediationOutcome::Kind::realized;
        out.value = *value;
      } else {
        // the allow record stands; record the failure and hand the
        // program an error value
        const EffectError& err = std::get<EffectError>(realized);
        try {
          ledger.append_marker(out.intent, std::string(effect_error_kind_name(err.kind)),
                               config.policy.policy_id, now_us());
        } catch (const LedgerError& e) {
          out.kind = MediationOutcome::Kind::aborted;
          out.error_message = e.what();
          return out;
        }
        out.kind = MediationOutcome::Kind::realized;
        out.value = effect_error_value(err);
      }
      return out;
    }
    case Decision::deny:
      out.kind = MediationOutcome::Kind::denied;
      out.value = denial_value(record.seq);
      return out;
    case Decision::escalate: {
      EscalationTicket ticket;
      ticket.ticket_id = "t-" + record.hash.substr(0, 16);
      ticket.record_seq = record.seq;
      ticket.intent = out.intent;
      Configuration snapshot = config;
      ticket.resume_state = serialize_ticket_state(snapshot, ticket, step.name);
      if (ledger.path()) persist_ticket(ticket, *ledger.path());
      out.kind = MediationOutcome::Kind::suspended;
      out.ticket = std::move(ticket);
      return out;
    }
  }
  out.kind = MediationOutcome::Kind::aborted;
  out.error_message = "unreachable decision";
  return out;
}

std::pair<Value, std::uint64_t> realize_resolved_escalation(const Intent& intent,
                                                            const std::string& ticket_id,
                                                            const std::string& policy_id,
                                                            Ledger& ledger,
                                                            EffectRegistry& effects) {
  const DecisionRecord record =
      ledger.append(AppendRequest{intent,
                                  Decision::allow,
                                  {std::string(kEscalationResolutionPrefix) + ticket_id},
                                  policy_id,
                                  intent.context,
                                  now_us()});
  const RealizeResult realized = effects.realize(intent);
  if (const Value* value = std::get_if<Value>(&realized)) return {*value, record.seq};
  const EffectError& err = std::get<EffectError>(realized);
  ledger.append_marker(intent, std::string(effect_error_kind_name(err.kind)), policy_id,
                       now_us());
  return {effect_error_value(err), record.seq};
}

}  // namespace idc::runtime
