#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace idc {

// Hard cap on the node count of any single Value accepted from external
// input. Enforced by the deserializer and the canonical serializer.
inline constexpr std::size_t kMaxValueNodes = 1'000'000;

// Nesting cap for external input; keeps recursive parsing on untrusted
// bytes within stack bounds.
inline constexpr std::size_t kMaxValueDepth = 512;

enum class ValueKind { unit, integer, boolean, string, list, map };

class ValueError : public std::runtime_error {
public:
  explicit ValueError(const std::string& msg) : std::runtime_error(msg) {}
};

// Immutable-ish structured value: unit | int64 | bool | utf-8 string |
// list | string-keyed map. Map entries are kept sorted by key (byte order)
// so iteration order is canonical by construction.
class Value {
public:
  using List = std::vector<Value>;
  using MapEntry = std::pair<std::string, Value>;
  using Map = std::vector<MapEntry>;

  Value() = default;

  static Value unit() { return Value(); }
  static Value integer(std::int64_t v) {
    Value out;
    out.kind_ = ValueKind::integer;
    out.int_ = v;
    return out;
  }
  static Value boolean(bool v) {
    Value out;
    out.kind_ = ValueKind::boolean;
    out.bool_ = v;
    return out;
  }
  static Value string(std::string v) {
    Value out;
    out.kind_ = ValueKind::string;
    out.str_ = std::move(v);
    return out;
  }
  // Throws ValueError past the depth bound (protects recursive walks).
  static Value list(List elems);
  // Sorts entries by key; duplicate keys are rejected.
  static Value map(Map entries);
  static Value empty_map() { return map({}); }

  ValueKind kind() const { return kind_; }
  bool is_unit() const { return kind_ == ValueKind::unit; }
  bool is_integer() const { return kind_ == ValueKind::integer; }
  bool is_boolean() const { return kind_ == ValueKind::boolean; }
  bool is_string() const { return kind_ == ValueKind::string; }
  bool is_list() const { return kind_ == ValueKind::list; }
  bool is_map() const { return kind_ == ValueKind::map; }

  std::int64_t as_integer() const {
    require(ValueKind::integer);
    return int_;
  }
  bool as_boolean() const {
    require(ValueKind::boolean);
    return bool_;
  }
  const std::string& as_string() const {
    require(ValueKind::string);
    return str_;
  }
  const List& as_list() const {
    require(ValueKind::list);
    return list_;
  }
  const Map& as_map() const {
    require(ValueKind::map);
    return map_;
  }

  // Map lookup; nullptr when absent (or when not a map).
  const Value* find(std::string_view key) const;

  // Map insert-or-replace; keeps entries sorted.
  void set(std::string key, Value v);

  // Cached; O(1).
  std::size_t node_count() const { return nodes_; }
  std::size_t depth() const { return depth_; }

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }

private:
  void require(ValueKind k) const {
    if (kind_ != k) throw ValueError("value kind mismatch");
  }
  void recompute_aggregates();

  ValueKind kind_ = ValueKind::unit;
  std::int64_t int_ = 0;
  bool bool_ = false;
  std::string str_;
  List list_;
  Map map_;
  std::uint64_t nodes_ = 1;
  std::uint32_t depth_ = 1;
};

bool value_equals(const Value& a, const Value& b);

// True iff `s` is well-formed UTF-8.
bool utf8_valid(std::string_view s);

}  // namespace idc
