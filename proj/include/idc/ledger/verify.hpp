#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idc/core/record.hpp"

namespace idc {

enum class VerifyFailure { hash_mismatch, prev_link_mismatch, seq_gap, malformed_line };

std::string_view verify_failure_name(VerifyFailure f);

struct VerificationReport {
  bool ok = true;
  std::optional<std::uint64_t> first_bad_seq;  // set iff !ok
  std::optional<VerifyFailure> reason;
  std::string detail;
  std::uint64_t records_checked = 0;

  static VerificationReport good(std::uint64_t checked) {
    VerificationReport r;
    r.records_checked = checked;
    return r;
  }
  static VerificationReport bad(std::uint64_t seq, VerifyFailure why, std::string detail,
                                std::uint64_t checked) {
    VerificationReport r;
    r.ok = false;
    r.first_bad_seq = seq;
    r.reason = why;
    r.detail = std::move(detail);
    r.records_checked = checked;
    return r;
  }
};

// Recomputes every hash and link from genesis over untrusted input.
// Needs nothing beyond the file bytes and SHA-256 — no policy engine, no
// runtime. Verification also demands byte-exact canonical lines, so any
// formatting deviation is reported as malformed rather than ignored.
VerificationReport verify_chain(const std::string& path);
VerificationReport verify_chain_text(std::string_view content);
VerificationReport verify_entries(const std::vector<LedgerEntry>& entries);

}  // namespace idc
