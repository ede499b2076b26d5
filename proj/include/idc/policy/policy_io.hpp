#pragma once

#include <string>
#include <string_view>

#include "idc/policy/policy.hpp"

namespace idc {

// One JSON document:
//   {"policy_id": "...", "default": "allow"|"deny"|"escalate",
//    "rules": [{"id": "...", "effect": "...", "predicate": {"kind": ...}}]}
// Predicate kinds: string_prefix {field, prefix}, set_member {field,
// allowed}, numeric_cmp {field, op, bound}, all_of/any_of {children},
// negate {child}, always_true {}. Unknown kinds are rejected.
PolicySet policy_from_json_text(std::string_view text);
PolicySet load_policy_file(const std::string& path);

std::string policy_to_json_text(const PolicySet& policy);

}  // namespace idc
