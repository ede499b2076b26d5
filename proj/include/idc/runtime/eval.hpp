#pragma once

#include <cstdint>
#include <stdexcept>

#include "idc/core/value.hpp"
#include "idc/lang/ast.hpp"

namespace idc::runtime {

// Engineering guards, not semantics: the budget bounds reductions per
// compute step, the depth bounds host-stack recursion.
inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000;
inline constexpr std::uint32_t kMaxEvalDepth = 10'000;

class EvalError : public std::runtime_error {
public:
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Call-by-value evaluation of the pure layer. `env` is a map holding the
// accumulated step bindings plus the "context" entry. Lambdas may appear
// during evaluation, but the result must be data. This translation unit
// has no access to the effect registry or the ledger.
Value eval_expr(const lang::Expr& expr, const Value& env,
                std::uint64_t step_budget = kDefaultStepBudget);

}  // namespace idc::runtime
