#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace idc {

using Sha256Digest = std::array<unsigned char, 32>;

// First record links to this constant: SHA-256("IDC-GENESIS-V1").
inline constexpr std::string_view kGenesisHash =
    "8ba657e3fead5e35f4a939b6079fa55d712e1eeb1528e0e98e775596d16ff0f8";

Sha256Digest sha256(std::string_view bytes);
std::string sha256_hex(std::string_view bytes);

std::string to_hex(const Sha256Digest& digest);
bool is_hex_digest(std::string_view s);
Sha256Digest hex_to_digest(std::string_view hex);

// h_k = SHA-256(record_bytes ∥ raw 32 bytes of prev_hash). `prev_hash_hex`
// must be a 64-char lowercase hex digest. Returns lowercase hex.
std::string chain_hash(std::string_view record_bytes, std::string_view prev_hash_hex);

}  // namespace idc
