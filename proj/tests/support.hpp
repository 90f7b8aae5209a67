#pragma once

#include <string_view>
#include <vector>

#include "origami/expr.hpp"
#include "origami/primitives.hpp"
#include "origami/syntax.hpp"
#include "origami/types.hpp"
#include "origami/value.hpp"

namespace test {

using namespace origami;

inline SemType I() { return SemType::int_type(); }
inline SemType F() { return SemType::float_type(); }
inline SemType B() { return SemType::bool_type(); }
inline SemType C() { return SemType::char_type(); }
inline SemType S() { return SemType::string_type(); }
inline SemType L(SemType t) { return SemType::list(t); }
inline SemType P(SemType a, SemType b) { return SemType::pair(a, b); }
inline SemType Fn(SemType a, SemType b) { return SemType::fun(a, b); }
inline SemType V(std::string_view n) { return SemType::var(n); }

inline Value iv(std::int64_t i) { return Value::of_int(i); }
inline Value bv(bool b) { return Value::of_bool(b); }
inline Value sv(std::string_view s) { return Value::of_string(s); }
inline Value ilist(std::vector<std::int64_t> xs) {
  ValueList v;
  for (auto x : xs) v.push_back(Value::of_int(x));
  return Value::of_list(std::move(v));
}

inline Expr ex(std::string_view text, const ScopeTypes& scope = {}) { return parse_expr(text, scope); }
inline PrimId prim(std::string_view name) { return Registry::standard().find(name)->id; }

}  // namespace test
