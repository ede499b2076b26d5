#include "idc/ledger/verify.hpp"

#include <fstream>
#include <sstream>

#include "idc/core/canonical.hpp"
#include "idc/core/hash.hpp"

namespace idc {

std::string_view verify_failure_name(VerifyFailure f) {
  switch (f) {
    case VerifyFailure::hash_mismatch:
      return "hash-mismatch";
    case VerifyFailure::prev_link_mismatch:
      return "prev-link-mismatch";
    case VerifyFailure::seq_gap:
      return "seq-gap";
    case VerifyFailure::malformed_line:
      return "malformed-line";
  }
  return "malformed-line";
}

namespace {

struct ChainState {
  std::uint64_t expected_seq = 0;
  std::string expected_prev{kGenesisHash};
};

std::optional<VerificationReport> check_one(const LedgerEntry& entry, ChainState& state) {
  if (entry_seq(entry) != state.expected_seq) {
    return VerificationReport::bad(state.expected_seq, VerifyFailure::seq_gap,
                                   "expected seq " + std::to_string(state.expected_seq) +
                                       ", found " + std::to_string(entry_seq(entry)),
                                   state.expected_seq);
  }
  if (entry_prev_hash(entry) != state.expected_prev) {
    return VerificationReport::bad(state.expected_seq, VerifyFailure::prev_link_mismatch,
                                   "prev_hash does not match preceding record hash",
                                   state.expected_seq);
  }
  if (!hash_consistent(entry)) {
    return VerificationReport::bad(state.expected_seq, VerifyFailure::hash_mismatch,
                                   "recomputed hash differs from stored hash",
                                   state.expected_seq);
  }
  state.expected_prev = entry_hash(entry);
  ++state.expected_seq;
  return std::nullopt;
}

}  // namespace

VerificationReport verify_chain_text(std::string_view content) {
  ChainState state;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;

    LedgerEntry entry;
    try {
      entry = parse_ledger_line(line);
    } catch (const std::exception& e) {
      return VerificationReport::bad(state.expected_seq, VerifyFailure::malformed_line, e.what(),
                                     state.expected_seq);
    }
    // The stored bytes must be exactly the canonical encoding; anything
    // else (reordered keys, stray whitespace, alternate escapes) is a
    // modification even if it parses to the same record.
    if (canonical_line(entry) != line) {
      return VerificationReport::bad(state.expected_seq, VerifyFailure::malformed_line,
                                     "line bytes are not the canonical record encoding",
                                     state.expected_seq);
    }
    if (auto bad = check_one(entry, state)) return *bad;
  }
  return VerificationReport::good(state.expected_seq);
}

VerificationReport verify_chain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return VerificationReport::bad(0, VerifyFailure::malformed_line,
                                   "cannot open ledger file: " + path, 0);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return verify_chain_text(buf.str());
}

VerificationReport verify_entries(const std::vector<LedgerEntry>& entries) {
  ChainState state;
  for (const LedgerEntry& entry : entries) {
    if (auto bad = check_one(entry, state)) return *bad;
  }
  return VerificationReport::good(state.expected_seq);
}

}  // namespace idc
