#pragma once

#include "idc/policy/policy.hpp"

namespace idc {

// Reference interpreter with the same contract as decide(), written as a
// deliberately naive second route: it flattens the intent/context into an
// explicit path table and evaluates votes in three separate passes. It
// shares only the domain types with decide() and exists to be diffed
// against it.
GovernanceOutcome oracle_decide(const PolicySet& policy, const Intent& intent,
                                const Value& context);

}  // namespace idc
