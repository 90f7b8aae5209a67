#include "origami/value.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "origami/syntax.hpp"

namespace origami {

Value Value::of_list(ValueList elems) {
  if (elems.empty()) return empty_list();
  return Value(Rep(std::make_shared<const ValueList>(std::move(elems))));
}

Value Value::of_list(ListRef elems) { return Value(Rep(std::move(elems))); }

Value Value::empty_list() {
  static const ListRef empty = std::make_shared<const ValueList>();
  return Value(Rep(empty));
}

Value Value::of_pair(Value a, Value b) {
  return Value(Rep(std::make_shared<const ValuePair>(std::move(a), std::move(b))));
}

Value Value::of_map(ValueMap sorted_entries) {
  return Value(Rep(std::make_shared<const ValueMap>(std::move(sorted_entries))));
}

Value Value::of_fun(FunRef f) { return Value(Rep(std::move(f))); }

Value Value::of_string(std::u32string_view s) {
  ValueList out;
  out.reserve(s.size());
  for (char32_t c : s) out.push_back(of_char(c));
  return of_list(std::move(out));
}

Value Value::of_string(std::string_view s) { return of_string(from_utf8(s)); }

std::u32string Value::as_u32string() const {
  std::u32string out;
  const ValueList& l = as_list();
  out.reserve(l.size());
  for (const Value& v : l) out.push_back(v.as_char());
  return out;
}

std::string Value::as_utf8() const { return to_utf8(as_u32string()); }

std::string Value::str() const { return render_value(*this); }

namespace {

int cmp_float(double a, double b) {
  bool na = std::isnan(a), nb = std::isnan(b);
  if (na || nb) return na == nb ? 0 : (na ? 1 : -1);
  return a < b ? -1 : (a > b ? 1 : 0);
}

template <typename T>
int cmp_scalar(T a, T b) {
  return a < b ? -1 : (a > b ? 1 : 0);
}

}  // namespace

int compare(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case ValueKind::Int:
      return cmp_scalar(a.as_int(), b.as_int());
    case ValueKind::Float:
      return cmp_float(a.as_float(), b.as_float());
    case ValueKind::Bool:
      return cmp_scalar(a.as_bool(), b.as_bool());
    case ValueKind::Char:
      return cmp_scalar(a.as_char(), b.as_char());
    case ValueKind::List: {
      const ValueList& x = a.as_list();
      const ValueList& y = b.as_list();
      if (&x == &y) return 0;
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(x[i], y[i])) return c;
      return cmp_scalar(x.size(), y.size());
    }
    case ValueKind::Pair: {
      if (int c = compare(a.as_pair().first, b.as_pair().first)) return c;
      return compare(a.as_pair().second, b.as_pair().second);
    }
    case ValueKind::Map: {
      const ValueMap& x = a.as_map();
      const ValueMap& y = b.as_map();
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(x[i].first, y[i].first)) return c;
        if (int c = compare(x[i].second, y[i].second)) return c;
      }
      return cmp_scalar(x.size(), y.size());
    }
    case ValueKind::Fun:
      throw std::logic_error("function values have no order");
  }
  return 0;
}

bool inhabits(const Value& v, SemType t) {
  switch (t.kind()) {
    case TypeKind::Int:
      return v.kind() == ValueKind::Int;
    case TypeKind::Float:
      return v.kind() == ValueKind::Float;
    case TypeKind::Bool:
      return v.kind() == ValueKind::Bool;
    case TypeKind::Char:
      return v.kind() == ValueKind::Char;
    case TypeKind::List:
      if (v.kind() != ValueKind::List) return false;
      return std::all_of(v.as_list().begin(), v.as_list().end(),
                         [&](const Value& e) { return inhabits(e, t.elem()); });
    case TypeKind::Pair:
      return v.kind() == ValueKind::Pair && inhabits(v.as_pair().first, t.first()) &&
             inhabits(v.as_pair().second, t.second());
    case TypeKind::Map:
      if (v.kind() != ValueKind::Map) return false;
      return std::all_of(v.as_map().begin(), v.as_map().end(), [&](const auto& kv) {
        return inhabits(kv.first, t.key()) && inhabits(kv.second, t.val());
      });
    case TypeKind::Fun:
      return v.kind() == ValueKind::Fun;
    case TypeKind::Var:
      return false;
  }
  return false;
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  for (char32_t c : s) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::u32string from_utf8(std::string_view s) {
  std::u32string out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto b = static_cast<unsigned char>(s[i]);
    char32_t c;
    int extra;
    if (b < 0x80) {
      c = b;
      extra = 0;
    } else if ((b >> 5) == 0x6) {
      c = b & 0x1F;
      extra = 1;
    } else if ((b >> 4) == 0xE) {
      c = b & 0x0F;
      extra = 2;
    } else if ((b >> 3) == 0x1E) {
      c = b & 0x07;
      extra = 3;
    } else {
      throw std::invalid_argument("invalid UTF-8 lead byte");
    }
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) throw std::invalid_argument("truncated UTF-8 sequence");
      c = (c << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    out.push_back(c);
    i += 1 + extra;
  }
  return out;
}

}  // namespace origami
