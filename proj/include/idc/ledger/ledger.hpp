#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idc/core/hash.hpp"
#include "idc/core/record.hpp"

namespace idc {

class LedgerError : public std::runtime_error {
public:
  explicit LedgerError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Durability {
  fast,     // user-space buffered, flushed on close/flush()
  durable,  // write + fdatasync per append
};

// All the fields append() seals into a DecisionRecord except
// seq/prev_hash/hash, which the ledger owns.
struct AppendRequest {
  Intent intent;
  Decision decision = Decision::deny;
  std::vector<std::string> applied_rules;
  std::string policy_id;
  Value context = Value::empty_map();
  std::int64_t timestamp_us = 0;
};

// Append-only hash-chained decision ledger. One writer per ledger;
// concurrent readers of closed files are safe.
class Ledger {
public:
  static Ledger in_memory();
  // Creates (or truncates) a file-backed ledger.
  static Ledger create(const std::string& path, Durability durability = Durability::durable);
  // Opens an existing ledger for further appends. The chain is verified
  // before any append is accepted.
  static Ledger open_existing(const std::string& path,
                              Durability durability = Durability::durable);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;
  Ledger(Ledger&& other) noexcept;
  Ledger& operator=(Ledger&& other) noexcept;
  ~Ledger();

  // Seals and persists exactly one record; throws LedgerError when
  // persistence fails (the caller must treat that as fatal for the
  // in-flight intent: no record, no effect).
  DecisionRecord append(const AppendRequest& request);
  MarkerRecord append_marker(const Intent& intent, const std::string& error_kind,
                             const std::string& policy_id, std::int64_t timestamp_us);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  std::uint64_t size() const { return entries_.size(); }
  const std::string& head_hash() const { return head_hash_; }
  const std::optional<std::string>& path() const { return path_; }

  void flush();
  void close();

private:
  Ledger() = default;
  void persist_line(const std::string& line);

  std::vector<LedgerEntry> entries_;
  std::string head_hash_ = std::string(kGenesisHash);
  std::optional<std::string> path_;  // nullopt = in-memory
  Durability durability_ = Durability::fast;
  int fd_ = -1;
  std::string buffer_;
};

struct ReadOptions {
  bool verify = true;  // callers may skip verification explicitly
};

// Yields records in seq order. Throws LedgerError with a line number on
// malformed lines, and (when options.verify) on any chain violation.
std::vector<LedgerEntry> read_stream(const std::string& path, ReadOptions options = {});

std::int64_t now_us();

}  // namespace idc
