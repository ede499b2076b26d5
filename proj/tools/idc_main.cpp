// idc — intent-driven computing runtime CLI.
//
// Programs produce intents; the governance interpreter decides; the
// hash-chained ledger records; effects realize only after an allow.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "idc/bench/bench.hpp"
#include "idc/casestudy/casestudy.hpp"
#include "idc/core/canonical.hpp"
#include "idc/lang/parse.hpp"
#include "idc/ledger/verify.hpp"
#include "idc/policy/policy_io.hpp"
#include "idc/replay/simulate.hpp"
#include "idc/runtime/ticket.hpp"

namespace fs = std::filesystem;
using namespace idc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTampered = 2;
constexpr int kExitDenied = 3;
constexpr int kExitSuspended = 4;

std::string read_file_or_die(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --context/--fixtures accept inline JSON or a file path
Value load_value_arg(const std::string& arg, const char* what) {
  if (arg.empty()) return Value::empty_map();
  std::string text = arg;
  if (arg[0] != '{' && arg[0] != '[') text = read_file_or_die(arg, what);
  Value v = value_from_json_text(text);
  if (!v.is_map()) throw std::runtime_error(std::string(what) + " must be a JSON object");
  return v;
}

std::string sandbox_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("IDC_SANDBOX"); env && *env) return env;
  if (!flag_value.empty()) return flag_value;
  return (fs::temp_directory_path() / "idc-sandbox").string();
}

Durability durability_from(const std::string& name) {
  if (name == "durable") return Durability::durable;
  if (name == "fast") return Durability::fast;
  throw std::runtime_error("unknown durability mode: " + name);
}

void write_out(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

nlohmann::json run_result_json(const runtime::RunResult& result) {
  nlohmann::json j;
  j["status"] = std::string(runtime::run_status_name(result.status));
  nlohmann::json trace = nlohmann::json::array();
  for (const runtime::TraceEntry& t : result.trace) {
    nlohmann::json tj;
    tj["action"] = t.intent.action;
    tj["target"] = t.intent.target;
    tj["decision"] = std::string(decision_name(t.decision));
    tj["record_seq"] = t.record_seq;
    trace.push_back(std::move(tj));
  }
  j["trace"] = std::move(trace);
  if (result.suspension) j["ticket_id"] = result.suspension->ticket_id;
  if (!result.error_message.empty()) {
    j["error_step"] = result.error_step;
    j["error"] = result.error_message;
  }
  return j;
}

int map_run_status(const runtime::RunResult& result, bool json_output) {
  if (json_output) std::cout << run_result_json(result).dump(2) << "\n";
  switch (result.status) {
    case runtime::RunStatus::completed:
      return kExitOk;
    case runtime::RunStatus::denied_halt:
      return kExitDenied;
    case runtime::RunStatus::suspended:
      return kExitSuspended;
    case runtime::RunStatus::runtime_error:
      std::cerr << "error at step " << result.error_step << ": " << result.error_message << "\n";
      return kExitError;
  }
  return kExitError;
}

int cmd_run(const std::string& program_path, const std::string& policy_path,
            const std::string& context_arg, const std::string& ledger_path,
            const std::string& fixtures_arg, const std::string& sandbox_flag,
            const std::string& durability, bool json_output) {
  const std::string source = read_file_or_die(program_path, "program");
  lang::ParseResult parsed = lang::parse(source);
  if (!parsed.ok()) {
    std::cerr << program_path << ":" << parsed.error->to_string() << "\n";
    return kExitError;
  }
  const PolicySet policy = load_policy_file(policy_path);
  const Value context = load_value_arg(context_arg, "context");

  EffectRegistry effects = register_builtin_machines(sandbox_dir(sandbox_flag));
  if (!fixtures_arg.empty())
    effects.set_http_fixtures(load_value_arg(fixtures_arg, "fixtures"));

  Ledger ledger = fs::exists(ledger_path)
                      ? Ledger::open_existing(ledger_path, durability_from(durability))
                      : Ledger::create(ledger_path, durability_from(durability));

  const runtime::RunResult result =
      runtime::run_program(*parsed.ast, policy, context, ledger, effects);
  ledger.close();

  if (!json_output) {
    for (const runtime::TraceEntry& t : result.trace)
      std::cout << t.intent.action << " -> " << decision_name(t.decision) << " (record "
                << t.record_seq << ")\n";
    std::cout << "status: " << runtime::run_status_name(result.status);
    if (result.suspension) std::cout << "  ticket: " << result.suspension->ticket_id;
    std::cout << "\n";
  } else if (result.suspension) {
    // ticket id still visible on stderr for scripts reading json from stdout
    std::cerr << "ticket: " << result.suspension->ticket_id << "\n";
  }
  return map_run_status(result, json_output);
}

int cmd_verify(const std::string& ledger_path, bool json_output) {
  if (!fs::exists(ledger_path)) {
    std::cerr << "cannot open ledger: " << ledger_path << "\n";
    return kExitError;
  }
  const VerificationReport report = verify_chain(ledger_path);
  if (json_output) {
    nlohmann::json j;
    j["ok"] = report.ok;
    j["records_checked"] = report.records_checked;
    if (!report.ok) {
      j["first_bad_seq"] = *report.first_bad_seq;
      j["reason"] = std::string(verify_failure_name(*report.reason));
      j["detail"] = report.detail;
    }
    std::cout << j.dump(2) << "\n";
  } else if (report.ok) {
    std::cout << "ok: " << report.records_checked << " records, chain verified\n";
  } else {
    std::cout << "TAMPERED at seq " << *report.first_bad_seq << ": "
              << verify_failure_name(*report.reason) << " (" << report.detail << ")\n";
  }
  return report.ok ? kExitOk : kExitTampered;
}

int cmd_simulate(const std::string& ledger_path, const std::string& policy_path,
                 const std::string& out_path, bool force, bool json_output) {
  const PolicySet policy = load_policy_file(policy_path);
  if (!force) {
    const VerificationReport report = verify_chain(ledger_path);
    if (!report.ok) {
      std::cerr << "ledger fails verification at seq " << *report.first_bad_seq
                << " (use --force to simulate anyway)\n";
      return kExitTampered;
    }
  }
  const auto stream = read_stream(ledger_path, ReadOptions{.verify = false});
  const replay::SimulationReport report = replay::simulate(policy, stream);
  const std::string json_text = replay::report_to_json_text(report);
  if (!out_path.empty()) write_out(out_path, json_text + "\n");
  std::cout << (json_output ? json_text + "\n" : replay::report_to_table_text(report));
  return kExitOk;
}

int cmd_replay_check(const std::string& ledger_path, const std::string& policy_path,
                     bool json_output) {
  const PolicySet policy = load_policy_file(policy_path);
  const VerificationReport chain = verify_chain(ledger_path);
  if (!chain.ok) {
    std::cerr << "ledger fails verification at seq " << *chain.first_bad_seq << "\n";
    return kExitTampered;
  }
  const auto stream = read_stream(ledger_path, ReadOptions{.verify = false});

  // replay the decide()-produced records only; reserved-rule records
  // (capability-miss, escalation resolutions) are reported, not re-decided
  std::vector<LedgerEntry> plain;
  std::uint64_t skipped = 0;
  for (const LedgerEntry& entry : stream) {
    const auto* record = std::get_if<DecisionRecord>(&entry);
    if (!record) {
      ++skipped;
      continue;
    }
    bool reserved = false;
    for (const std::string& id : record->applied_rules)
      if (is_reserved_rule_id(id)) reserved = true;
    if (reserved) {
      ++skipped;
      continue;
    }
    plain.push_back(entry);
  }
  const replay::SimulationReport report = replay::simulate(policy, plain);
  const std::uint64_t flips = report.flips();
  if (json_output) {
    nlohmann::json j;
    j["records"] = report.total;
    j["flips"] = flips;
    j["skipped"] = skipped;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "replay-check: " << report.total << " records re-decided, " << flips
              << " flips";
    if (skipped) std::cout << " (" << skipped << " reserved/marker records skipped)";
    std::cout << "\n";
  }
  return flips == 0 ? kExitOk : kExitTampered;
}

int cmd_approve(const std::string& ticket, bool allow, bool deny, const std::string& ledger_path,
                const std::string& sandbox_flag, const std::string& fixtures_arg,
                bool json_output) {
  if (allow == deny) {
    std::cerr << "exactly one of --allow / --deny is required\n";
    return kExitError;
  }
  const std::string ticket_path =
      fs::exists(ticket) ? ticket : runtime::ticket_path_for(ledger_path, ticket);

  EffectRegistry effects = register_builtin_machines(sandbox_dir(sandbox_flag));
  if (!fixtures_arg.empty())
    effects.set_http_fixtures(load_value_arg(fixtures_arg, "fixtures"));

  Ledger ledger = Ledger::open_existing(ledger_path);
  try {
    const runtime::RunResult result = runtime::resume_from_file(
        ticket_path, allow ? Decision::allow : Decision::deny, ledger, effects);
    ledger.close();
    if (!json_output)
      std::cout << "resumed: " << runtime::run_status_name(result.status) << "\n";
    return map_run_status(result, json_output);
  } catch (const runtime::TicketError& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
}

int cmd_bench(const std::string& rules_csv, std::uint64_t iterations, std::uint64_t warmup,
              const std::string& durability, const std::string& out_path, bool json_output) {
  bench::BenchOptions options;
  options.iterations = iterations;
  options.warmup = warmup;
  options.durability = durability_from(durability);
  options.rule_counts.clear();
  std::stringstream ss(rules_csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) options.rule_counts.push_back(std::stoul(part));
  }
  if (options.rule_counts.empty()) throw std::runtime_error("--rules must be non-empty");

  const bench::BenchReport report = bench::run_bench(options);
  const std::string json_text = bench::report_to_json_text(report);
  if (!out_path.empty()) write_out(out_path, json_text + "\n");
  std::cout << (json_output ? json_text + "\n" : bench::report_to_table_text(report));
  return kExitOk;
}

int cmd_case_study(std::uint64_t seed, std::size_t count, const std::string& out_path,
                   const std::string& sandbox_flag, const std::string& ledger_path,
                   bool json_output) {
  casestudy::WorkloadSpec spec;
  spec.seed = seed;
  spec.count = count;

  const std::string sandbox = sandbox_dir(sandbox_flag);
  EffectRegistry effects = register_builtin_machines(sandbox);
  const std::string path =
      ledger_path.empty() ? (fs::path(sandbox) / "case-study.idledger").string() : ledger_path;
  Ledger ledger = Ledger::create(path, Durability::fast);

  const PolicySet policy_a =
      casestudy::refund_policy(casestudy::kDefaultLimitCents, "refund-policy-a");
  const PolicySet policy_b =
      casestudy::refund_policy(casestudy::kRaisedLimitCents, "refund-policy-b");
  const casestudy::CaseReport report =
      casestudy::run_case_study(spec, policy_a, policy_b, ledger, effects);
  ledger.close();

  const std::string json_text = casestudy::case_report_to_json_text(report);
  if (!out_path.empty()) write_out(out_path, json_text + "\n");
  if (json_output) {
    std::cout << json_text << "\n";
  } else {
    std::cout << "requests: " << report.requests << "  allowed: " << report.run.allowed
              << "  denied: " << report.run.denied << "  escalated: " << report.run.escalated
              << "  records: " << report.run.records << "\n"
              << "deny->allow flips under the raised limit: " << report.deny_to_allow_flips
              << "\n"
              << "oracle match: " << (report.matches_oracle ? "yes" : "NO") << "\n"
              << "ledger: " << path << "\n";
  }
  return report.matches_oracle ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intent-driven computing runtime"};
  app.require_subcommand(1);
  bool json_output = false;
  app.add_flag("--json", json_output, "emit JSON on stdout");

  // run
  std::string program_path, policy_path, context_arg, ledger_path, fixtures_arg, sandbox_flag;
  std::string durability = "durable";
  auto* run = app.add_subcommand("run", "parse and execute a program under governance");
  run->add_option("program", program_path, "program file (.idp)")->required();
  run->add_option("--policy", policy_path, "policy JSON file")->required();
  run->add_option("--context", context_arg, "initial context (JSON file or inline object)");
  run->add_option("--ledger", ledger_path, "ledger file (.idledger)")->required();
  run->add_option("--fixtures", fixtures_arg, "http fixture map (JSON file or inline)");
  run->add_option("--sandbox", sandbox_flag, "sandbox directory (IDC_SANDBOX overrides)");
  run->add_option("--durability", durability, "fast|durable")->check(CLI::IsMember({"fast", "durable"}));

  // verify
  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "recompute and check a ledger hash chain");
  verify->add_option("ledger", verify_path, "ledger file")->required();

  // simulate
  std::string sim_ledger, sim_policy, sim_out;
  bool sim_force = false;
  auto* simulate = app.add_subcommand("simulate", "replay a ledger against a new policy");
  simulate->add_option("--ledger", sim_ledger)->required();
  simulate->add_option("--policy", sim_policy, "hypothetical policy JSON")->required();
  simulate->add_option("--out", sim_out, "write the JSON report here");
  simulate->add_flag("--force", sim_force, "simulate even if verification fails");

  // replay-check
  std::string rc_ledger, rc_policy;
  auto* replay_check =
      app.add_subcommand("replay-check", "re-decide a ledger against its own policy");
  replay_check->add_option("--ledger", rc_ledger)->required();
  replay_check->add_option("--policy", rc_policy, "the policy the ledger was produced under")
      ->required();

  // approve
  std::string ticket_arg, approve_ledger, approve_sandbox, approve_fixtures;
  bool approve_allow = false, approve_deny = false;
  auto* approve = app.add_subcommand("approve", "resolve an escalation ticket");
  approve->add_option("ticket", ticket_arg, "ticket id or .idticket path")->required();
  approve->add_flag("--allow", approve_allow, "authorize the suspended intent");
  approve->add_flag("--deny", approve_deny, "reject the suspended intent");
  approve->add_option("--ledger", approve_ledger)->required();
  approve->add_option("--sandbox", approve_sandbox);
  approve->add_option("--fixtures", approve_fixtures);

  // bench
  std::string bench_rules = "5,10,20", bench_durability = "durable", bench_out;
  std::uint64_t bench_iterations = 10'000, bench_warmup = 1'000;
  auto* bench_cmd = app.add_subcommand("bench", "measure governance overhead");
  bench_cmd->add_option("--rules", bench_rules, "comma-separated rule counts");
  bench_cmd->add_option("--iterations", bench_iterations);
  bench_cmd->add_option("--warmup", bench_warmup);
  bench_cmd->add_option("--durability", bench_durability)
      ->check(CLI::IsMember({"fast", "durable"}));
  bench_cmd->add_option("--out", bench_out, "write the JSON report here");

  // case-study
  std::uint64_t cs_seed = 42;
  std::size_t cs_count = 200;
  std::string cs_out, cs_sandbox, cs_ledger;
  auto* case_study = app.add_subcommand("case-study", "refund-agent workload with oracle check");
  case_study->add_option("--seed", cs_seed);
  case_study->add_option("--count", cs_count);
  case_study->add_option("--out", cs_out, "write the JSON report here");
  case_study->add_option("--sandbox", cs_sandbox);
  case_study->add_option("--ledger", cs_ledger);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(program_path, policy_path, context_arg, ledger_path, fixtures_arg,
                     sandbox_flag, durability, json_output);
    if (verify->parsed()) return cmd_verify(verify_path, json_output);
    if (simulate->parsed())
      return cmd_simulate(sim_ledger, sim_policy, sim_out, sim_force, json_output);
    if (replay_check->parsed()) return cmd_replay_check(rc_ledger, rc_policy, json_output);
    if (approve->parsed())
      return cmd_approve(ticket_arg, approve_allow, approve_deny, approve_ledger,
                         approve_sandbox, approve_fixtures, json_output);
    if (bench_cmd->parsed())
      return cmd_bench(bench_rules, bench_iterations, bench_warmup, bench_durability, bench_out,
                       json_output);
    if (case_study->parsed())
      return cmd_case_study(cs_seed, cs_count, cs_out, cs_sandbox, cs_ledger, json_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
