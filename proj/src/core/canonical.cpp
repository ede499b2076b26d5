#include "idc/core/canonical.hpp"

#include <array>
#include <charconv>

#include <json.hpp>

namespace idc {

void canonical_append_escaped(std::string& out, std::string_view s) {
  static constexpr char hex[] = "0123456789abcdef";
  for (char ch : s) {
    const unsigned char c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case 0x08:
        out += "\\b";
        break;
      case 0x09:
        out += "\\t";
        break;
      case 0x0A:
        out += "\\n";
        break;
      case 0x0C:
        out += "\\f";
        break;
      case 0x0D:
        out += "\\r";
        break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out += hex[(c >> 4) & 0xF];
          out += hex[c & 0xF];
        } else {
          out += ch;
        }
    }
  }
}

namespace {

void append_value(std::string& out, const Value& v) {
  switch (v.kind()) {
    case ValueKind::unit:
      out += "null";
      break;
    case ValueKind::boolean:
      out += v.as_boolean() ? "true" : "false";
      break;
    case ValueKind::integer: {
      std::array<char, 24> buf;
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v.as_integer());
      out.append(buf.data(), res.ptr);
      break;
    }
    case ValueKind::string:
      if (!utf8_valid(v.as_string()))
        throw SerializationError("string is not valid UTF-8");
      out += '"';
      canonical_append_escaped(out, v.as_string());
      out += '"';
      break;
    case ValueKind::list: {
      out += '[';
      bool first = true;
      for (const Value& e : v.as_list()) {
        if (!first) out += ',';
        first = false;
        append_value(out, e);
      }
      out += ']';
      break;
    }
    case ValueKind::map: {
      out += '{';
      bool first = true;
      for (const auto& [key, val] : v.as_map()) {
        if (!utf8_valid(key)) throw SerializationError("map key is not valid UTF-8");
        if (!first) out += ',';
        first = false;
        out += '"';
        canonical_append_escaped(out, key);
        out += "\":";
        append_value(out, val);
      }
      out += '}';
      break;
    }
  }
}

Value from_json(const nlohmann::json& j, std::size_t& budget) {
  if (budget == 0) throw DeserializationError("value exceeds node bound");
  --budget;
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return Value::unit();
    case nlohmann::json::value_t::boolean:
      return Value::boolean(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return Value::integer(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: {
      const std::uint64_t u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX))
        throw DeserializationError("integer out of int64 range");
      return Value::integer(static_cast<std::int64_t>(u));
    }
    case nlohmann::json::value_t::string: {
      std::string s = j.get<std::string>();
      if (!utf8_valid(s)) throw DeserializationError("string is not valid UTF-8");
      return Value::string(std::move(s));
    }
    case nlohmann::json::value_t::array: {
      Value::List elems;
      elems.reserve(j.size());
      for (const auto& e : j) elems.push_back(from_json(e, budget));
      return Value::list(std::move(elems));
    }
    case nlohmann::json::value_t::object: {
      Value::Map entries;
      entries.reserve(j.size());
      for (auto it = j.begin(); it != j.end(); ++it)
        entries.emplace_back(it.key(), from_json(it.value(), budget));
      return Value::map(std::move(entries));
    }
    default:
      throw DeserializationError("unsupported JSON value (floats are rejected)");
  }
}

}  // namespace

void canonical_append(std::string& out, const Value& v) {
  if (v.node_count() > kMaxValueNodes)
    throw SerializationError("value exceeds node bound");
  append_value(out, v);
}

std::string canonical_serialize(const Value& v) {
  std::string out;
  canonical_append(out, v);
  return out;
}

namespace {

// String-aware bracket-depth scan; guards the recursive JSON parser
// against hostile nesting before it runs.
bool nesting_within_bound(std::string_view text, std::size_t bound) {
  std::size_t depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (char c : text) {
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        break;
      case '[':
      case '{':
        if (++depth > bound) return false;
        break;
      case ']':
      case '}':
        if (depth > 0) --depth;
        break;
      default:
        break;
    }
  }
  return true;
}

}  // namespace

Value value_from_json_text(std::string_view text) {
  if (!nesting_within_bound(text, kMaxValueDepth))
    throw DeserializationError("value exceeds nesting bound");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DeserializationError(std::string("invalid JSON: ") + e.what());
  }
  std::size_t budget = kMaxValueNodes;
  return from_json(j, budget);
}

}  // namespace idc
