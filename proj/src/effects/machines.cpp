#include <fstream>

#include "idc/core/canonical.hpp"
#include "idc/core/hash.hpp"
#include "idc/effects/registry.hpp"

namespace idc {

namespace fs = std::filesystem;

namespace {

// Lexical confinement: relative, normalized, and free of ".." segments.
fs::path sandboxed_path(const fs::path& root, const std::string& sub, const char* what) {
  const fs::path p(sub);
  if (p.is_absolute()) throw HandlerFailure(std::string(what) + ": path escapes sandbox");
  const fs::path normal = p.lexically_normal();
  for (const auto& part : normal) {
    if (part == "..") throw HandlerFailure(std::string(what) + ": path escapes sandbox");
  }
  if (normal.empty() || normal == ".")
    throw HandlerFailure(std::string(what) + ": empty path");
  return root / normal;
}

std::string require_string(const Intent& intent, const std::string& name) {
  const Value* v = intent.params.find(name);
  if (!v || !v->is_string()) throw HandlerFailure("param '" + name + "' must be a string");
  return v->as_string();
}

Value email_send(EffectRegistry& registry, const Intent& intent) {
  const std::string to = require_string(intent, "to");
  const std::string subject = require_string(intent, "subject");
  const std::string body = require_string(intent, "body");
  const std::string message_id = sha256_hex(canonical_serialize(intent.params)).substr(0, 16);

  const fs::path outbox = registry.sandbox_root() / "outbox";
  fs::create_directories(outbox);
  std::ofstream out(outbox / (message_id + ".eml"), std::ios::binary | std::ios::trunc);
  if (!out) throw HandlerFailure("cannot write outbox file");
  out << "To: " << to << "\n"
      << "Subject: " << subject << "\n"
      << "Message-Id: <" << message_id << "@idc.sandbox>\n\n"
      << body << "\n";
  if (!out.flush()) throw HandlerFailure("outbox write failed");

  Value result = Value::empty_map();
  result.set("sent", Value::boolean(true));
  result.set("message_id", Value::string(message_id));
  return result;
}

Value http_get(EffectRegistry& registry, const Intent& intent) {
  const std::string url = require_string(intent, "url");
  const Value* fixture = registry.http_fixtures().find(url);
  if (!fixture) throw HandlerFailure("no fixture for " + url);

  Value result = Value::empty_map();
  result.set("url", Value::string(url));
  if (fixture->is_map()) {
    const Value* status = fixture->find("status");
    const Value* body = fixture->find("body");
    result.set("status", status ? *status : Value::integer(200));
    result.set("body", body ? *body : Value::string(""));
  } else {
    result.set("status", Value::integer(200));
    result.set("body", *fixture);
  }
  return result;
}

Value file_write(EffectRegistry& registry, const Intent& intent) {
  const std::string path = require_string(intent, "path");
  const std::string content = require_string(intent, "content");
  const fs::path target =
      sandboxed_path(registry.sandbox_root() / "files", path, "file.write");
  fs::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw HandlerFailure("cannot open " + path);
  out << content;
  if (!out.flush()) throw HandlerFailure("write failed for " + path);

  Value result = Value::empty_map();
  result.set("written", Value::boolean(true));
  result.set("bytes", Value::integer(static_cast<std::int64_t>(content.size())));
  return result;
}

Value file_read(EffectRegistry& registry, const Intent& intent) {
  const std::string path = require_string(intent, "path");
  const fs::path target = sandboxed_path(registry.sandbox_root() / "files", path, "file.read");
  std::ifstream in(target, std::ios::binary);
  if (!in) throw HandlerFailure("no such file: " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Value result = Value::empty_map();
  result.set("content", Value::string(std::move(content)));
  return result;
}

Value kv_put(EffectRegistry& registry, const Intent& intent) {
  const std::string key = require_string(intent, "key");
  const Value* value = intent.params.find("value");
  if (!value) throw HandlerFailure("param 'value' is required");
  registry.kv_put(key, *value);

  Value result = Value::empty_map();
  result.set("stored", Value::boolean(true));
  result.set("key", Value::string(key));
  return result;
}

Value kv_get(EffectRegistry& registry, const Intent& intent) {
  const std::string key = require_string(intent, "key");
  const Value* value = registry.kv_get(key);

  Value result = Value::empty_map();
  result.set("found", Value::boolean(value != nullptr));
  result.set("value", value ? *value : Value::unit());
  return result;
}

Value payment_refund(EffectRegistry& registry, const Intent& intent) {
  const std::string request_id = require_string(intent, "request_id");
  const Value* amount = intent.params.find("amount_cents");
  if (!amount || !amount->is_integer())
    throw HandlerFailure("param 'amount_cents' must be an integer");
  const Value* customer = intent.params.find("customer_id");

  const fs::path payments = registry.sandbox_root() / "payments";
  fs::create_directories(payments);
  std::ofstream out(payments / "refunds.csv", std::ios::binary | std::ios::app);
  if (!out) throw HandlerFailure("cannot open refunds.csv");
  out << request_id << "," << (customer && customer->is_string() ? customer->as_string() : "")
      << "," << amount->as_integer() << "\n";
  if (!out.flush()) throw HandlerFailure("refund row write failed");

  Value result = Value::empty_map();
  result.set("refunded", Value::boolean(true));
  result.set("amount_cents", *amount);
  result.set("ref", Value::string(sha256_hex(canonical_serialize(intent.params)).substr(0, 16)));
  return result;
}

}  // namespace

EffectRegistry register_builtin_machines(const fs::path& sandbox_root) {
  std::error_code ec;
  fs::create_directories(sandbox_root, ec);
  if (ec) throw std::runtime_error("io-failure: cannot create sandbox root " +
                                   sandbox_root.string());

  EffectRegistry registry;
  registry.set_sandbox_root(sandbox_root);

  registry.register_machine({"@stdlib/email/send",
                             "email.send",
                             {{"to", ValueKind::string},
                              {"subject", ValueKind::string},
                              {"body", ValueKind::string}},
                             email_send});
  registry.register_machine({"@stdlib/http/get", "http.get", {{"url", ValueKind::string}}, http_get});
  registry.register_machine({"@stdlib/file/write",
                             "file.write",
                             {{"path", ValueKind::string}, {"content", ValueKind::string}},
                             file_write});
  registry.register_machine(
      {"@stdlib/file/read", "file.read", {{"path", ValueKind::string}}, file_read});
  registry.register_machine({"@stdlib/kv/put", "kv.put", {{"key", ValueKind::string}}, kv_put});
  registry.register_machine({"@stdlib/kv/get", "kv.get", {{"key", ValueKind::string}}, kv_get});
  registry.register_machine({"@stdlib/payment/refund",
                             "payment.refund",
                             {{"request_id", ValueKind::string}},
                             payment_refund});
  return registry;
}

}  // namespace idc
