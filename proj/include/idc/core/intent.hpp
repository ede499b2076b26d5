#pragma once

#include <string>

#include "idc/core/value.hpp"

namespace idc {

// A proposed effectful operation. Carries no authority: producing an
// Intent does nothing until the runtime mediates and realizes it.
struct Intent {
  std::string action;  // dot-separated verb path, e.g. "email.send"
  std::string target;  // machine id, e.g. "@stdlib/email/send"
  Value params = Value::empty_map();
  Value context = Value::empty_map();  // snapshot at production time

  bool operator==(const Intent& other) const = default;
};

// Throws ValueError when action/target are empty or params/context are
// not maps.
void validate_intent(const Intent& intent);

// Canonical bytes of the intent as a 4-key object (keys sorted).
std::string canonical_serialize(const Intent& intent);
void canonical_append(std::string& out, const Intent& intent);

// SHA-256 hex of the canonical bytes; used to join ledger records with
// effect-registry invocations.
std::string intent_hash(const Intent& intent);

}  // namespace idc
