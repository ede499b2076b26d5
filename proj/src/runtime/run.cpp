#include "idc/runtime/run.hpp"

namespace idc::runtime {

std::string_view run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::denied_halt:
      return "denied_halt";
    case RunStatus::suspended:
      return "suspended";
    case RunStatus::runtime_error:
      return "runtime_error";
  }
  return "runtime_error";
}

RunResult run_configuration(Configuration config, Ledger& ledger, EffectRegistry& effects) {
  RunResult result;
  for (; config.step_index < config.program.steps.size(); ++config.step_index) {
    const lang::Step& step = config.program.steps[config.step_index];

    if (const auto* compute = std::get_if<lang::ComputeStep>(&step)) {
      try {
        Value value = eval_expr(compute->expr, build_env(config.context),
                                config.limits.step_budget);
        config.context.set(compute->binding, std::move(value));
      } catch (const std::exception& e) {
        result.status = RunStatus::runtime_error;
        result.error_step = compute->name;
        result.error_message = e.what();
        result.final_env = config.context;
        return result;
      }
      continue;
    }

    const auto& ask = std::get<lang::AskStep>(step);
    MediationOutcome m = mediate_and_realize(ask, config, ledger, effects);
    if (m.kind == MediationOutcome::Kind::aborted) {
      result.status = RunStatus::runtime_error;
      result.error_step = ask.name;
      result.error_message = m.error_message;
      result.final_env = config.context;
      return result;
    }

    result.trace.push_back(TraceEntry{m.intent, m.decision, m.record_seq});
    switch (m.kind) {
      case MediationOutcome::Kind::realized:
        config.context.set(ask.binding, std::move(m.value));
        break;
      case MediationOutcome::Kind::denied:
        result.status = RunStatus::denied_halt;
        result.final_env = config.context;
        return result;
      case MediationOutcome::Kind::suspended:
        result.status = RunStatus::suspended;
        result.suspension = std::move(m.ticket);
        result.final_env = config.context;
        return result;
      case MediationOutcome::Kind::aborted:
        break;  // handled above
    }
  }
  result.status = RunStatus::completed;
  result.final_env = config.context;
  return result;
}

RunResult run_program(const lang::ProgramAst& program, const PolicySet& policy,
                      const Value& initial_context, Ledger& ledger, EffectRegistry& effects,
                      const RuntimeLimits& limits) {
  Configuration config;
  config.program = program;
  config.context = initial_context.is_map() ? initial_context : Value::empty_map();
  config.policy = policy;
  config.capability_stack = {program.capabilities};
  config.limits = limits;
  return run_configuration(std::move(config), ledger, effects);
}

RunResult call_machine_as_subprogram(const Configuration& parent, const lang::ProgramAst& child,
                                     const Value& child_context, Ledger& ledger,
                                     EffectRegistry& effects) {
  Configuration config;
  config.program = child;
  config.context = child_context.is_map() ? child_context : Value::empty_map();
  config.policy = parent.policy;
  config.limits = parent.limits;
  config.capability_stack = parent.capability_stack;
  config.capability_stack.push_back(
      intersect_capabilities(effective_capabilities(parent.capability_stack),
                             child.capabilities));
  return run_configuration(std::move(config), ledger, effects);
}

}  // namespace idc::runtime
