#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "idc/core/value.hpp"

namespace idc {

class SerializationError : public std::runtime_error {
public:
  explicit SerializationError(const std::string& msg) : std::runtime_error(msg) {}
};

class DeserializationError : public std::runtime_error {
public:
  explicit DeserializationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Canonical byte encoding: a JSON subset with map keys in lexicographic
// byte order of their UTF-8 encoding, no insignificant whitespace,
// integers in plain decimal, and a fixed escape set (\" \\ \b \t \n \f \r,
// any other control character as \u00xx with lowercase hex). The same
// logical value always yields identical bytes.
std::string canonical_serialize(const Value& v);
void canonical_append(std::string& out, const Value& v);

// Escapes one string body (no surrounding quotes) with the canonical scheme.
void canonical_append_escaped(std::string& out, std::string_view s);

// Strict inverse used for ledger read-back and external files. Rejects
// non-integer numbers, invalid UTF-8, and values over the node bound.
Value value_from_json_text(std::string_view text);

}  // namespace idc
