#pragma once

#include <random>
#include <string>
#include <vector>

#include "idc/core/intent.hpp"
#include "idc/core/value.hpp"
#include "idc/policy/policy.hpp"

// Shared randomized-input generators for property tests and the
// acceptance suite. All draws are deterministic per seed.
namespace idc::testgen {

using Rng = std::mt19937_64;

inline std::int64_t pick_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline std::size_t pick_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
}

std::string random_key(Rng& rng);
std::string random_string(Rng& rng);
Value random_value(Rng& rng, int depth_budget = 3);
Value random_map_value(Rng& rng, int depth_budget = 3);

// Intents whose params/context overlap the field-path pool used by
// random_predicate, so predicates actually fire.
Intent random_intent(Rng& rng);
Value random_context(Rng& rng);

Predicate random_predicate(Rng& rng, int depth_budget = 3);
PolicySet random_policy(Rng& rng, std::size_t max_rules = 8);

}  // namespace idc::testgen
