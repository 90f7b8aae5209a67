#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "origami/types.hpp"

namespace origami {

class Value;
class Closure;

using ValueList = std::vector<Value>;
using ValuePair = std::pair<Value, Value>;
// Sorted by key under compare(); keys unique.
using ValueMap = std::vector<std::pair<Value, Value>>;

using ListRef = std::shared_ptr<const ValueList>;
using PairRef = std::shared_ptr<const ValuePair>;
using MapRef = std::shared_ptr<const ValueMap>;
using FunRef = std::shared_ptr<const Closure>;

enum class ValueKind : std::uint8_t { Int, Float, Bool, Char, List, Pair, Map, Fun };

// Immutable runtime value. Aggregates share their payload.
class Value {
 public:
  Value() : v_(std::int64_t{0}) {}
  static Value of_int(std::int64_t i) { return Value(Rep(i)); }
  static Value of_float(double d) { return Value(Rep(d)); }
  static Value of_bool(bool b) { return Value(Rep(b)); }
  static Value of_char(char32_t c) { return Value(Rep(c)); }
  static Value of_list(ValueList elems);
  static Value of_list(ListRef elems);
  static Value of_pair(Value a, Value b);
  static Value of_map(ValueMap sorted_entries);
  static Value of_fun(FunRef f);
  static Value of_string(std::u32string_view s);
  static Value of_string(std::string_view ascii_or_utf8);
  static Value empty_list();

  ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }

  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  char32_t as_char() const { return std::get<char32_t>(v_); }
  const ValueList& as_list() const { return *std::get<ListRef>(v_); }
  const ListRef& list_ref() const { return std::get<ListRef>(v_); }
  const ValuePair& as_pair() const { return *std::get<PairRef>(v_); }
  const ValueMap& as_map() const { return *std::get<MapRef>(v_); }
  const Closure& as_fun() const { return *std::get<FunRef>(v_); }

  // For ListT(CharT) values.
  std::u32string as_u32string() const;
  std::string as_utf8() const;

  // Debug rendering (Haskell-like, untyped).
  std::string str() const;

 private:
  using Rep = std::variant<std::int64_t, double, bool, char32_t, ListRef, PairRef, MapRef, FunRef>;
  explicit Value(Rep r) : v_(std::move(r)) {}
  Rep v_;
};

// Total order over non-function values: kind first (Int < Float < Bool < Char
// < List < Pair < Map), then by content; sequences lexicographic. NaN sorts
// above every other float and equal to itself. Throws std::logic_error on
// function values.
int compare(const Value& a, const Value& b);
inline bool equal(const Value& a, const Value& b) { return compare(a, b) == 0; }

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare(a, b) < 0; }
};

// True when v inhabits t (structurally; function values are accepted for any
// FunT since closures do not carry their type).
bool inhabits(const Value& v, SemType t);

std::string to_utf8(std::u32string_view s);
std::u32string from_utf8(std::string_view s);

}  // namespace origami
