#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "idc/core/intent.hpp"

namespace idc {

enum class EffectErrorKind { unknown_machine, param_validation_failure, handler_failure };

std::string_view effect_error_kind_name(EffectErrorKind k);

struct EffectError {
  EffectErrorKind kind = EffectErrorKind::handler_failure;
  std::string message;
};

using RealizeResult = std::variant<Value, EffectError>;

// Thrown by machine handlers; realize() converts it into an EffectError.
class HandlerFailure : public std::runtime_error {
public:
  explicit HandlerFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParamSpec {
  std::string name;
  ValueKind kind = ValueKind::string;
};

class EffectRegistry;

struct EffectMachine {
  std::string machine_id;   // e.g. "@stdlib/email/send"
  std::string action_path;  // e.g. "email.send"
  std::vector<ParamSpec> required_params;
  std::function<Value(EffectRegistry&, const Intent&)> handler;
};

struct InvocationRecord {
  std::string intent_hash;
  std::string machine_id;
  bool ok = false;
  std::string error_kind;  // empty when ok
};

// Registry of realizable effects. All builtin machines are sandboxed
// mocks: deterministic, no network, no writes outside sandbox_root.
class EffectRegistry {
public:
  explicit EffectRegistry(std::vector<std::string> allowed_action_namespaces = {
                              "email.", "http.", "file.", "kv.", "payment."});

  // Rejects duplicate ids and actions outside the namespace allowlist.
  void register_machine(EffectMachine machine);

  const EffectMachine* find(std::string_view machine_id) const;
  std::size_t machine_count() const { return machines_.size(); }
  std::vector<std::string> machine_ids() const;

  // Dispatches the intent to its machine; validates required params; runs
  // the handler; always logs exactly one invocation entry per call. Must
  // be reached only through the runtime's mediation path.
  RealizeResult realize(const Intent& intent);

  const std::vector<InvocationRecord>& invocation_log() const { return invocation_log_; }

  // Shared state for the builtin mocks.
  const std::filesystem::path& sandbox_root() const { return sandbox_root_; }
  void set_sandbox_root(std::filesystem::path root) { sandbox_root_ = std::move(root); }
  void set_http_fixtures(Value fixtures);  // map url -> {status, body}
  const Value& http_fixtures() const { return http_fixtures_; }

  // kv store (exclusive mutation under a lock)
  void kv_put(const std::string& key, Value value);
  const Value* kv_get(const std::string& key) const;

private:
  std::vector<std::string> allowed_namespaces_;
  std::map<std::string, EffectMachine, std::less<>> machines_;
  std::vector<InvocationRecord> invocation_log_;
  std::filesystem::path sandbox_root_;
  Value http_fixtures_ = Value::empty_map();
  std::map<std::string, Value> kv_;
  std::unique_ptr<std::mutex> kv_mutex_ = std::make_unique<std::mutex>();
};

// Builds the 7-machine builtin roster backed by sandbox_root:
//   @stdlib/email/send    -> writes <root>/outbox/<message_id>.eml
//   @stdlib/http/get      -> canned responses from the fixture map
//   @stdlib/file/write    -> <root>/files/** only
//   @stdlib/file/read     -> <root>/files/** only
//   @stdlib/kv/put        -> in-memory map
//   @stdlib/kv/get        -> in-memory map
//   @stdlib/payment/refund-> appends a row to <root>/payments/refunds.csv
EffectRegistry register_builtin_machines(const std::filesystem::path& sandbox_root);

}  // namespace idc
