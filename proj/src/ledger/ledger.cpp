#include "idc/ledger/ledger.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include "idc/core/canonical.hpp"
#include "idc/ledger/verify.hpp"

namespace idc {

namespace {

constexpr std::size_t kFastModeBufferLimit = 256 * 1024;

[[noreturn]] void io_fail(const std::string& what) {
  throw LedgerError("io-failure: " + what + ": " + std::strerror(errno));
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    lines.push_back(content.substr(start, end - start));
    start = end + 1;
  }
  // A trailing newline produces no phantom empty line by construction.
  return lines;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LedgerError("cannot open ledger file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::int64_t now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Ledger Ledger::in_memory() { return Ledger(); }

Ledger Ledger::create(const std::string& path, Durability durability) {
  Ledger ledger;
  ledger.path_ = path;
  ledger.durability_ = durability;
  ledger.fd_ = ::open(path.c_str(), O_CREAT | O_TRUNC | O_WRONLY, 0644);
  if (ledger.fd_ < 0) io_fail("create " + path);
  return ledger;
}

Ledger Ledger::open_existing(const std::string& path, Durability durability) {
  const std::string content = read_file(path);
  const VerificationReport report = verify_chain_text(content);
  if (!report.ok)
    throw LedgerError("refusing to append to a ledger that fails verification (" +
                      std::string(verify_failure_name(*report.reason)) + " at seq " +
                      std::to_string(*report.first_bad_seq) + ")");

  Ledger ledger;
  ledger.path_ = path;
  ledger.durability_ = durability;
  for (std::string_view line : split_lines(content)) {
    if (line.empty()) continue;
    ledger.entries_.push_back(parse_ledger_line(line));
    ledger.head_hash_ = entry_hash(ledger.entries_.back());
  }
  ledger.fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND);
  if (ledger.fd_ < 0) io_fail("open " + path);
  return ledger;
}

Ledger::Ledger(Ledger&& other) noexcept { *this = std::move(other); }

Ledger& Ledger::operator=(Ledger&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    entries_ = std::move(other.entries_);
    head_hash_ = std::move(other.head_hash_);
    path_ = std::move(other.path_);
    durability_ = other.durability_;
    fd_ = std::exchange(other.fd_, -1);
    buffer_ = std::move(other.buffer_);
  }
  return *this;
}

Ledger::~Ledger() {
  try {
    close();
  } catch (...) {
    // Destructor must not throw; close() explicitly if loss matters.
  }
}

void Ledger::persist_line(const std::string& line) {
  if (fd_ < 0) return;  // in-memory backing
  if (durability_ == Durability::fast) {
    buffer_ += line;
    buffer_ += '\n';
    if (buffer_.size() >= kFastModeBufferLimit) flush();
    return;
  }
  std::string data = line + "\n";
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("write");
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) io_fail("fdatasync");
}

DecisionRecord Ledger::append(const AppendRequest& request) {
  validate_intent(request.intent);
  DecisionRecord record;
  record.seq = entries_.size();
  record.timestamp_us = request.timestamp_us;
  record.intent = request.intent;
  record.decision = request.decision;
  record.applied_rules = request.applied_rules;
  record.policy_id = request.policy_id;
  record.context = request.context;
  record.prev_hash = head_hash_;
  seal(record);

  persist_line(canonical_line(record));
  entries_.emplace_back(record);
  head_hash_ = record.hash;
  return record;
}

MarkerRecord Ledger::append_marker(const Intent& intent, const std::string& error_kind,
                                   const std::string& policy_id, std::int64_t timestamp_us) {
  MarkerRecord record;
  record.seq = entries_.size();
  record.timestamp_us = timestamp_us;
  record.intent = intent;
  record.error_kind = error_kind;
  record.policy_id = policy_id;
  record.prev_hash = head_hash_;
  seal(record);

  persist_line(canonical_line(record));
  entries_.emplace_back(record);
  head_hash_ = record.hash;
  return record;
}

void Ledger::flush() {
  if (fd_ < 0) return;
  const char* p = buffer_.data();
  std::size_t left = buffer_.size();
  while (left > 0) {
    const ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("write");
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  buffer_.clear();
}

void Ledger::close() {
  if (fd_ < 0) return;
  flush();
  ::close(fd_);
  fd_ = -1;
}

std::vector<LedgerEntry> read_stream(const std::string& path, ReadOptions options) {
  const std::string content = read_file(path);
  if (options.verify) {
    const VerificationReport report = verify_chain_text(content);
    if (!report.ok)
      throw LedgerError("ledger fails verification (" +
                        std::string(verify_failure_name(*report.reason)) + " at seq " +
                        std::to_string(*report.first_bad_seq) + ")");
  }

  std::vector<LedgerEntry> entries;
  std::uint64_t line_no = 0;
  for (std::string_view line : split_lines(content)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      entries.push_back(parse_ledger_line(line));
    } catch (const DeserializationError& e) {
      throw LedgerError("malformed-line at line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return entries;
}

}  // namespace idc
