#include "idc/effects/registry.hpp"

namespace idc {

std::string_view effect_error_kind_name(EffectErrorKind k) {
  switch (k) {
    case EffectErrorKind::unknown_machine:
      return "unknown-machine";
    case EffectErrorKind::param_validation_failure:
      return "param-validation-failure";
    case EffectErrorKind::handler_failure:
      return "handler-failure";
  }
  return "handler-failure";
}

EffectRegistry::EffectRegistry(std::vector<std::string> allowed_action_namespaces)
    : allowed_namespaces_(std::move(allowed_action_namespaces)) {}

void EffectRegistry::register_machine(EffectMachine machine) {
  if (machine.machine_id.empty()) throw std::invalid_argument("machine id is empty");
  if (machine.action_path.empty()) throw std::invalid_argument("action path is empty");
  bool namespace_ok = false;
  for (const std::string& ns : allowed_namespaces_) {
    if (machine.action_path.rfind(ns, 0) == 0) {
      namespace_ok = true;
      break;
    }
  }
  if (!namespace_ok)
    throw std::invalid_argument("action '" + machine.action_path +
                                "' is outside the configured namespace allowlist");
  const auto [it, inserted] = machines_.emplace(machine.machine_id, std::move(machine));
  if (!inserted) throw std::invalid_argument("duplicate machine id: " + it->first);
}

const EffectMachine* EffectRegistry::find(std::string_view machine_id) const {
  const auto it = machines_.find(machine_id);
  return it == machines_.end() ? nullptr : &it->second;
}

std::vector<std::string> EffectRegistry::machine_ids() const {
  std::vector<std::string> ids;
  ids.reserve(machines_.size());
  for (const auto& [id, _] : machines_) ids.push_back(id);
  return ids;
}

namespace {

bool shape_matches(const Value& v, ValueKind kind) { return v.kind() == kind; }

}  // namespace

RealizeResult EffectRegistry::realize(const Intent& intent) {
  InvocationRecord log_entry;
  log_entry.intent_hash = intent_hash(intent);
  log_entry.machine_id = intent.target;

  auto fail = [&](EffectErrorKind kind, std::string message) -> RealizeResult {
    log_entry.ok = false;
    log_entry.error_kind = std::string(effect_error_kind_name(kind));
    invocation_log_.push_back(std::move(log_entry));
    return EffectError{kind, std::move(message)};
  };

  const auto it = machines_.find(intent.target);
  if (it == machines_.end())
    return fail(EffectErrorKind::unknown_machine, "no machine registered as " + intent.target);
  const EffectMachine& machine = it->second;

  for (const ParamSpec& spec : machine.required_params) {
    const Value* v = intent.params.find(spec.name);
    if (!v)
      return fail(EffectErrorKind::param_validation_failure,
                  "missing required param '" + spec.name + "'");
    if (!shape_matches(*v, spec.kind))
      return fail(EffectErrorKind::param_validation_failure,
                  "param '" + spec.name + "' has the wrong shape");
  }

  try {
    Value result = machine.handler(*this, intent);
    log_entry.ok = true;
    invocation_log_.push_back(std::move(log_entry));
    return result;
  } catch (const HandlerFailure& e) {
    return fail(EffectErrorKind::handler_failure, e.what());
  } catch (const std::exception& e) {
    return fail(EffectErrorKind::handler_failure, std::string("handler threw: ") + e.what());
  }
}

void EffectRegistry::set_http_fixtures(Value fixtures) {
  if (!fixtures.is_map()) throw std::invalid_argument("http fixtures must be a map");
  http_fixtures_ = std::move(fixtures);
}

void EffectRegistry::kv_put(const std::string& key, Value value) {
  std::lock_guard<std::mutex> lock(*kv_mutex_);
  kv_[key] = std::move(value);
}

const Value* EffectRegistry::kv_get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(*kv_mutex_);
  const auto it = kv_.find(key);
  return it == kv_.end() ? nullptr : &it->second;
}

}  // namespace idc
