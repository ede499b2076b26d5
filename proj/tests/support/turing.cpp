#include "turing.hpp"

namespace idc::testgen {

TmResult simulate_direct(const TmSpec& spec, std::int64_t limit) {
  TmResult r;
  r.state = spec.start;
  r.tape = spec.tape;
  std::int64_t head = 0;
  while (r.state != spec.halt && r.steps <= limit) {
    const auto it = spec.rules.find({r.state, r.tape[static_cast<std::size_t>(head)]});
    if (it == spec.rules.end()) {
      r.state = "STUCK";
      return r;
    }
    const TmRule& rule = it->second;
    r.tape[static_cast<std::size_t>(head)] = rule.write;
    head += rule.move == 'R' ? 1 : -1;
    if (head < 0) {
      r.tape.insert(r.tape.begin(), 0);
      head = 0;
    } else if (head >= static_cast<std::int64_t>(r.tape.size())) {
      r.tape.push_back(0);
    }
    r.state = rule.next;
    ++r.steps;
  }
  return r;
}

Value tm_tape_to_value(const std::vector<int>& tape) {
  Value::List cells;
  for (int c : tape) cells.push_back(Value::integer(c));
  return Value::list(std::move(cells));
}

Value tm_spec_to_value(const TmSpec& spec) {
  Value rules = Value::empty_map();
  for (const auto& [key, rule] : spec.rules) {
    Value r = Value::empty_map();
    r.set("w", Value::integer(rule.write));
    r.set("m", Value::string(std::string(1, rule.move)));
    r.set("n", Value::string(rule.next));
    rules.set(key.first + "," + std::to_string(key.second), std::move(r));
  }
  Value out = Value::empty_map();
  out.set("rules", std::move(rules));
  out.set("start", Value::string(spec.start));
  out.set("halt", Value::string(spec.halt));
  return out;
}

TmSpec tm_increment() {
  TmSpec spec;
  spec.name = "unary-increment";
  spec.rules[{"A", 1}] = {1, 'R', "A"};
  spec.rules[{"A", 0}] = {1, 'R', "H"};
  spec.tape = {1, 1, 1};
  return spec;
}

TmSpec tm_parity() {
  TmSpec spec;
  spec.name = "parity";
  spec.start = "E";
  spec.rules[{"E", 1}] = {1, 'R', "O"};
  spec.rules[{"E", 2}] = {2, 'R', "E"};
  spec.rules[{"O", 1}] = {1, 'R', "E"};
  spec.rules[{"O", 2}] = {2, 'R', "O"};
  spec.rules[{"E", 0}] = {2, 'R', "H"};
  spec.rules[{"O", 0}] = {1, 'R', "H"};
  spec.tape = {1, 2, 1, 1};
  return spec;
}

TmSpec tm_busy_beaver3() {
  TmSpec spec;
  spec.name = "busy-beaver-3";
  spec.rules[{"A", 0}] = {1, 'R', "B"};
  spec.rules[{"A", 1}] = {1, 'L', "C"};
  spec.rules[{"B", 0}] = {1, 'L', "A"};
  spec.rules[{"B", 1}] = {1, 'R', "B"};
  spec.rules[{"C", 0}] = {1, 'L', "B"};
  spec.rules[{"C", 1}] = {1, 'R', "H"};
  spec.tape = {0};
  return spec;
}

}  // namespace idc::testgen
