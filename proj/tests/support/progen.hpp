#pragma once

#include "gen.hpp"
#include "idc/lang/ast.hpp"

// Random program/expression generators: arbitrary-but-valid ASTs for the
// parser round-trip, and runnable programs (asks against the builtin
// mock roster) for the runtime harnesses.
namespace idc::testgen {

// Valid AST for parse(unparse(ast)) round-trips; every identifier is
// bound, every literal is surface-representable.
lang::ProgramAst random_program_ast(Rng& rng);
lang::Expr random_expr(Rng& rng, std::vector<std::string> scope, int depth_budget = 3);

// A program whose asks target builtin machines with handler-safe params
// and whose compute steps cannot fail (used by the theorem harnesses).
lang::ProgramAst random_runnable_program(Rng& rng, bool full_capabilities = true);

// Random policy whose rules address the actions the runnable programs
// produce; allow-heavy so effects actually realize.
PolicySet random_run_policy(Rng& rng);

}  // namespace idc::testgen
