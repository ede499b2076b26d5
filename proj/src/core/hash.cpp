#include "idc/core/hash.hpp"

#include <stdexcept>

#include <openssl/evp.h>

namespace idc {

Sha256Digest sha256(std::string_view bytes) {
  Sha256Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  return out;
}

std::string to_hex(const Sha256Digest& digest) {
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (unsigned char b : digest) {
    out += hex[(b >> 4) & 0xF];
    out += hex[b & 0xF];
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) { return to_hex(sha256(bytes)); }

namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

bool is_hex_digest(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s)
    if (hex_nibble(c) < 0) return false;
  return true;
}

Sha256Digest hex_to_digest(std::string_view hex) {
  if (!is_hex_digest(hex)) throw std::invalid_argument("not a 64-char lowercase hex digest");
  Sha256Digest out{};
  for (std::size_t i = 0; i < 32; ++i) {
    out[i] = static_cast<unsigned char>((hex_nibble(hex[2 * i]) << 4) | hex_nibble(hex[2 * i + 1]));
  }
  return out;
}

std::string chain_hash(std::string_view record_bytes, std::string_view prev_hash_hex) {
  const Sha256Digest prev = hex_to_digest(prev_hash_hex);
  std::string input;
  input.reserve(record_bytes.size() + prev.size());
  input.append(record_bytes);
  input.append(reinterpret_cast<const char*>(prev.data()), prev.size());
  return sha256_hex(input);
}

}  // namespace idc
