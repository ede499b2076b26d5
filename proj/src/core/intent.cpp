#include "idc/core/intent.hpp"

#include "idc/core/canonical.hpp"
#include "idc/core/hash.hpp"

namespace idc {

void validate_intent(const Intent& intent) {
  if (intent.action.empty()) throw ValueError("intent action is empty");
  if (intent.target.empty()) throw ValueError("intent target is empty");
  if (!intent.params.is_map()) throw ValueError("intent params must be a map");
  if (!intent.context.is_map()) throw ValueError("intent context must be a map");
}

void canonical_append(std::string& out, const Intent& intent) {
  out += "{\"action\":";
  canonical_append(out, Value::string(intent.action));
  out += ",\"context\":";
  canonical_append(out, intent.context);
  out += ",\"params\":";
  canonical_append(out, intent.params);
  out += ",\"target\":";
  canonical_append(out, Value::string(intent.target));
  out += '}';
}

std::string canonical_serialize(const Intent& intent) {
  std::string out;
  canonical_append(out, intent);
  return out;
}

std::string intent_hash(const Intent& intent) { return sha256_hex(canonical_serialize(intent)); }

}  // namespace idc
