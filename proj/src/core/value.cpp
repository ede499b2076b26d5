#include "idc/core/value.hpp"

#include <algorithm>

namespace idc {

void Value::recompute_aggregates() {
  std::uint64_t nodes = 1;
  std::uint32_t child_depth = 0;
  if (kind_ == ValueKind::list) {
    for (const Value& e : list_) {
      nodes += e.nodes_;
      child_depth = std::max(child_depth, e.depth_);
    }
  } else if (kind_ == ValueKind::map) {
    for (const MapEntry& e : map_) {
      nodes += e.second.nodes_;
      child_depth = std::max(child_depth, e.second.depth_);
    }
  }
  nodes_ = nodes;
  depth_ = child_depth + 1;
  if (depth_ > kMaxValueDepth) throw ValueError("value exceeds nesting bound");
}

Value Value::list(List elems) {
  Value out;
  out.kind_ = ValueKind::list;
  out.list_ = std::move(elems);
  out.recompute_aggregates();
  return out;
}

Value Value::map(Map entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const MapEntry& a, const MapEntry& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1].first == entries[i].first)
      throw ValueError("duplicate map key: " + entries[i].first);
  }
  Value out;
  out.kind_ = ValueKind::map;
  out.map_ = std::move(entries);
  out.recompute_aggregates();
  return out;
}

const Value* Value::find(std::string_view key) const {
  if (kind_ != ValueKind::map) return nullptr;
  auto it = std::lower_bound(map_.begin(), map_.end(), key,
                             [](const MapEntry& e, std::string_view k) { return e.first < k; });
  if (it == map_.end() || it->first != key) return nullptr;
  return &it->second;
}

void Value::set(std::string key, Value v) {
  require(ValueKind::map);
  auto it = std::lower_bound(map_.begin(), map_.end(), key,
                             [](const MapEntry& e, const std::string& k) { return e.first < k; });
  if (it != map_.end() && it->first == key) {
    it->second = std::move(v);
  } else {
    map_.insert(it, MapEntry{std::move(key), std::move(v)});
  }
  recompute_aggregates();
}

bool Value::operator==(const Value& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case ValueKind::unit:
      return true;
    case ValueKind::integer:
      return int_ == other.int_;
    case ValueKind::boolean:
      return bool_ == other.bool_;
    case ValueKind::string:
      return str_ == other.str_;
    case ValueKind::list:
      return list_ == other.list_;
    case ValueKind::map:
      return map_ == other.map_;
  }
  return false;
}

bool value_equals(const Value& a, const Value& b) { return a == b; }

bool utf8_valid(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      i += 1;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;
    if (cp > 0x10FFFF) return false;
    i += len;
  }
  return true;
}

}  // namespace idc
