#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace pgview {

using NodeId = std::uint64_t;
using EdgeId = std::uint64_t;

/// Property value: 64-bit integer, double, string, or boolean.
/// Equality is exact; doubles compare by bit pattern so that values
/// survive render/parse round trips without tolerance questions.
class PropertyValue {
 public:
  PropertyValue() : v_(std::int64_t{0}) {}
  PropertyValue(std::int64_t v) : v_(v) {}
  PropertyValue(int v) : v_(static_cast<std::int64_t>(v)) {}
  PropertyValue(double v) : v_(v) {}
  PropertyValue(std::string v) : v_(std::move(v)) {}
  PropertyValue(const char* v) : v_(std::string(v)) {}
  PropertyValue(bool v) : v_(v) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_double() const { return std::holds_alternative<double>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_double() const { return std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }

  friend bool operator==(const PropertyValue& a, const PropertyValue& b) {
    if (a.v_.index() != b.v_.index()) return false;
    if (a.is_double()) {
      return std::bit_cast<std::uint64_t>(a.as_double()) ==
             std::bit_cast<std::uint64_t>(b.as_double());
    }
    return a.v_ == b.v_;
  }
  friend bool operator!=(const PropertyValue& a, const PropertyValue& b) { return !(a == b); }

  // Total order for index keys; doubles order by bit pattern, which is
  // consistent (not numeric) and sufficient for map lookup.
  friend bool operator<(const PropertyValue& a, const PropertyValue& b) {
    if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
    if (a.is_double()) {
      return std::bit_cast<std::uint64_t>(a.as_double()) <
             std::bit_cast<std::uint64_t>(b.as_double());
    }
    return a.v_ < b.v_;
  }

  /// Literal form as it appears in statement text ("7", "1.5", "'x'", "true").
  std::string to_text() const;

 private:
  std::variant<std::int64_t, double, std::string, bool> v_;
};

using PropertyMap = std::map<std::string, PropertyValue>;

}  // namespace pgview
