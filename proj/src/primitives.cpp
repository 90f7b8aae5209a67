#include "origami/primitives.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cwctype>
#include <limits>
#include <stdexcept>

#include "origami/interpreter.hpp"

namespace origami {

SemType Primitive::as_type() const {
  SemType t = ret;
  for (auto it = params.rbegin(); it != params.rend(); ++it) t = SemType::fun(*it, t);
  return t;
}

std::string show_float(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

namespace {

using I64 = std::int64_t;
constexpr I64 kI64Min = std::numeric_limits<I64>::min();

inline Status put(Value& out, Value v) {
  out = std::move(v);
  return Status::Ok;
}
inline Status put_int(Value& out, I64 v) { return put(out, Value::of_int(v)); }
inline Status put_float(Value& out, double v) { return put(out, Value::of_float(v)); }
inline Status put_bool(Value& out, bool v) { return put(out, Value::of_bool(v)); }

inline I64 I(const Value* a, int k) { return a[k].as_int(); }
inline double F(const Value* a, int k) { return a[k].as_float(); }

// Charges the size of a structure about to be built, before allocating it.
inline Status charge(Interpreter& in, std::size_t n) { return in.debit(static_cast<I64>(n)); }

Status add_int(const Value* a, Value& out, Interpreter&) {
  I64 r;
  if (__builtin_add_overflow(I(a, 0), I(a, 1), &r)) return Status::Overflow;
  return put_int(out, r);
}
Status sub_int(const Value* a, Value& out, Interpreter&) {
  I64 r;
  if (__builtin_sub_overflow(I(a, 0), I(a, 1), &r)) return Status::Overflow;
  return put_int(out, r);
}
Status mult_int(const Value* a, Value& out, Interpreter&) {
  I64 r;
  if (__builtin_mul_overflow(I(a, 0), I(a, 1), &r)) return Status::Overflow;
  return put_int(out, r);
}
// Floor division.
Status div_int(const Value* a, Value& out, Interpreter&) {
  I64 x = I(a, 0), y = I(a, 1);
  if (y == 0) return Status::DivByZero;
  if (x == kI64Min && y == -1) return Status::Overflow;
  I64 q = x / y;
  if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
  return put_int(out, q);
}
Status quot_int(const Value* a, Value& out, Interpreter&) {
  I64 x = I(a, 0), y = I(a, 1);
  if (y == 0) return Status::DivByZero;
  if (x == kI64Min && y == -1) return Status::Overflow;
  return put_int(out, x / y);
}
// Result takes the sign of the divisor.
Status mod_int(const Value* a, Value& out, Interpreter&) {
  I64 x = I(a, 0), y = I(a, 1);
  if (y == 0) return Status::DivByZero;
  if (y == -1) return put_int(out, 0);
  I64 r = x % y;
  if (r != 0 && ((r < 0) != (y < 0))) r += y;
  return put_int(out, r);
}
Status rem_int(const Value* a, Value& out, Interpreter&) {
  I64 x = I(a, 0), y = I(a, 1);
  if (y == 0) return Status::DivByZero;
  if (y == -1) return put_int(out, 0);
  return put_int(out, x % y);
}
Status min_int(const Value* a, Value& out, Interpreter&) { return put_int(out, std::min(I(a, 0), I(a, 1))); }
Status max_int(const Value* a, Value& out, Interpreter&) { return put_int(out, std::max(I(a, 0), I(a, 1))); }
Status abs_int(const Value* a, Value& out, Interpreter&) {
  if (I(a, 0) == kI64Min) return Status::Overflow;
  return put_int(out, I(a, 0) < 0 ? -I(a, 0) : I(a, 0));
}
Status succ_int(const Value* a, Value& out, Interpreter&) {
  I64 r;
  if (__builtin_add_overflow(I(a, 0), I64{1}, &r)) return Status::Overflow;
  return put_int(out, r);
}
Status pred_int(const Value* a, Value& out, Interpreter&) {
  I64 r;
  if (__builtin_sub_overflow(I(a, 0), I64{1}, &r)) return Status::Overflow;
  return put_int(out, r);
}

Status add_float(const Value* a, Value& out, Interpreter&) { return put_float(out, F(a, 0) + F(a, 1)); }
Status sub_float(const Value* a, Value& out, Interpreter&) { return put_float(out, F(a, 0) - F(a, 1)); }
Status mult_float(const Value* a, Value& out, Interpreter&) { return put_float(out, F(a, 0) * F(a, 1)); }
Status div_float(const Value* a, Value& out, Interpreter&) {
  if (F(a, 1) == 0.0) return Status::DivByZero;
  return put_float(out, F(a, 0) / F(a, 1));
}
Status min_float(const Value* a, Value& out, Interpreter&) {
  return put_float(out, F(a, 1) < F(a, 0) ? F(a, 1) : F(a, 0));
}
Status max_float(const Value* a, Value& out, Interpreter&) {
  return put_float(out, F(a, 1) > F(a, 0) ? F(a, 1) : F(a, 0));
}
Status abs_float(const Value* a, Value& out, Interpreter&) { return put_float(out, std::fabs(F(a, 0))); }
Status sqrt_float(const Value* a, Value& out, Interpreter&) { return put_float(out, std::sqrt(F(a, 0))); }
Status sin_float(const Value* a, Value& out, Interpreter&) { return put_float(out, std::sin(F(a, 0))); }
Status cos_float(const Value* a, Value& out, Interpreter&) { return put_float(out, std::cos(F(a, 0))); }
Status succ_float(const Value* a, Value& out, Interpreter&) { return put_float(out, F(a, 0) + 1.0); }
Status pred_float(const Value* a, Value& out, Interpreter&) { return put_float(out, F(a, 0) - 1.0); }
Status from_integral(const Value* a, Value& out, Interpreter&) {
  return put_float(out, static_cast<double>(I(a, 0)));
}

Status to_int(double d, Value& out) {
  // 2^63 is exactly representable; anything at or beyond it does not fit.
  if (!std::isfinite(d) || d >= 9223372036854775808.0 || d < -9223372036854775808.0)
    return Status::ConversionError;
  return put_int(out, static_cast<I64>(d));
}
Status floor_float(const Value* a, Value& out, Interpreter&) { return to_int(std::floor(F(a, 0)), out); }
Status ceiling_float(const Value* a, Value& out, Interpreter&) { return to_int(std::ceil(F(a, 0)), out); }
// Halves round to even.
Status round_float(const Value* a, Value& out, Interpreter&) {
  double x = F(a, 0);
  double r = std::round(x);
  if (std::fabs(x - std::trunc(x)) == 0.5) r = 2.0 * std::round(x / 2.0);
  return to_int(r, out);
}

Status lt_int(const Value* a, Value& out, Interpreter&) { return put_bool(out, I(a, 0) < I(a, 1)); }
Status gt_int(const Value* a, Value& out, Interpreter&) { return put_bool(out, I(a, 0) > I(a, 1)); }
Status gte_int(const Value* a, Value& out, Interpreter&) { return put_bool(out, I(a, 0) >= I(a, 1)); }
Status lte_int(const Value* a, Value& out, Interpreter&) { return put_bool(out, I(a, 0) <= I(a, 1)); }
Status lt_float(const Value* a, Value& out, Interpreter&) { return put_bool(out, F(a, 0) < F(a, 1)); }
Status gt_float(const Value* a, Value& out, Interpreter&) { return put_bool(out, F(a, 0) > F(a, 1)); }
Status gte_float(const Value* a, Value& out, Interpreter&) { return put_bool(out, F(a, 0) >= F(a, 1)); }
Status lte_float(const Value* a, Value& out, Interpreter&) { return put_bool(out, F(a, 0) <= F(a, 1)); }

Status and_bool(const Value* a, Value& out, Interpreter&) { return put_bool(out, a[0].as_bool() && a[1].as_bool()); }
Status or_bool(const Value* a, Value& out, Interpreter&) { return put_bool(out, a[0].as_bool() || a[1].as_bool()); }
Status not_bool(const Value* a, Value& out, Interpreter&) { return put_bool(out, !a[0].as_bool()); }
// Only reached through eval_primitive; the interpreter special-forms `if`.
Status if_then_else(const Value* a, Value& out, Interpreter&) { return put(out, a[0].as_bool() ? a[1] : a[2]); }
Status eq_any(const Value* a, Value& out, Interpreter&) { return put_bool(out, equal(a[0], a[1])); }
Status neq_any(const Value* a, Value& out, Interpreter&) { return put_bool(out, !equal(a[0], a[1])); }

Status show_int(const Value* a, Value& out, Interpreter&) {
  return put(out, Value::of_string(std::to_string(I(a, 0))));
}
Status show_float_prim(const Value* a, Value& out, Interpreter&) {
  return put(out, Value::of_string(show_float(F(a, 0))));
}
Status show_bool(const Value* a, Value& out, Interpreter&) {
  return put(out, Value::of_string(a[0].as_bool() ? "True" : "False"));
}
// The one-character string, not a quoted literal.
Status show_char(const Value* a, Value& out, Interpreter&) { return put(out, Value::of_list(ValueList{a[0]})); }
Status char_to_int(const Value* a, Value& out, Interpreter&) {
  return put_int(out, static_cast<I64>(a[0].as_char()));
}
Status int_to_char(const Value* a, Value& out, Interpreter&) {
  I64 c = I(a, 0);
  if (c < 0 || c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) return Status::ConversionError;
  return put(out, Value::of_char(static_cast<char32_t>(c)));
}
Status is_letter(const Value* a, Value& out, Interpreter&) {
  char32_t c = a[0].as_char();
  bool r = c < 128 ? ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))
                   : std::iswalpha(static_cast<wint_t>(c)) != 0;
  return put_bool(out, r);
}
Status is_space(const Value* a, Value& out, Interpreter&) {
  char32_t c = a[0].as_char();
  return put_bool(out, c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
                           c == 0xA0);
}
Status is_digit(const Value* a, Value& out, Interpreter&) {
  char32_t c = a[0].as_char();
  return put_bool(out, c >= '0' && c <= '9');
}

Status length_list(const Value* a, Value& out, Interpreter&) {
  return put_int(out, static_cast<I64>(a[0].as_list().size()));
}
Status cons_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[1].as_list();
  ValueList r;
  r.reserve(xs.size() + 1);
  r.push_back(a[0]);
  r.insert(r.end(), xs.begin(), xs.end());
  return put(out, Value::of_list(std::move(r)));
}
Status snoc_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[1].as_list();
  ValueList r;
  r.reserve(xs.size() + 1);
  r.insert(r.end(), xs.begin(), xs.end());
  r.push_back(a[0]);
  return put(out, Value::of_list(std::move(r)));
}
Status mappend_list(const Value* a, Value& out, Interpreter& in) {
  const ValueList& xs = a[0].as_list();
  const ValueList& ys = a[1].as_list();
  if (Status s = charge(in, xs.size() + ys.size()); s != Status::Ok) return s;
  if (xs.empty()) return put(out, a[1]);
  if (ys.empty()) return put(out, a[0]);
  ValueList r;
  r.reserve(xs.size() + ys.size());
  r.insert(r.end(), xs.begin(), xs.end());
  r.insert(r.end(), ys.begin(), ys.end());
  return put(out, Value::of_list(std::move(r)));
}
Status elem_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[1].as_list();
  bool found = std::any_of(xs.begin(), xs.end(), [&](const Value& v) { return equal(v, a[0]); });
  return put_bool(out, found);
}
// Removes the first occurrence only.
Status delete_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[1].as_list();
  auto it = std::find_if(xs.begin(), xs.end(), [&](const Value& v) { return equal(v, a[0]); });
  if (it == xs.end()) return put(out, a[1]);
  ValueList r;
  r.reserve(xs.size() - 1);
  r.insert(r.end(), xs.begin(), it);
  r.insert(r.end(), it + 1, xs.end());
  return put(out, Value::of_list(std::move(r)));
}
Status null_list(const Value* a, Value& out, Interpreter&) { return put_bool(out, a[0].as_list().empty()); }
Status head_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[0].as_list();
  if (xs.empty()) return Status::EmptyStructure;
  return put(out, xs.front());
}
Status last_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[0].as_list();
  if (xs.empty()) return Status::EmptyStructure;
  return put(out, xs.back());
}
Status tail_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[0].as_list();
  if (xs.empty()) return Status::EmptyStructure;
  return put(out, Value::of_list(ValueList(xs.begin() + 1, xs.end())));
}
Status init_list(const Value* a, Value& out, Interpreter&) {
  const ValueList& xs = a[0].as_list();
  if (xs.empty()) return Status::EmptyStructure;
  return put(out, Value::of_list(ValueList(xs.begin(), xs.end() - 1)));
}
Status zip_list(const Value* a, Value& out, Interpreter& in) {
  const ValueList& xs = a[0].as_list();
  const ValueList& ys = a[1].as_list();
  std::size_t n = std::min(xs.size(), ys.size());
  if (Status s = charge(in, n); s != Status::Ok) return s;
  ValueList r;
  r.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.push_back(Value::of_pair(xs[i], ys[i]));
  return put(out, Value::of_list(std::move(r)));
}
Status replicate_list(const Value* a, Value& out, Interpreter& in) {
  I64 n = I(a, 0);
  if (n <= 0) return put(out, Value::empty_list());
  if (Status s = in.debit(n); s != Status::Ok) return s;
  return put(out, Value::of_list(ValueList(static_cast<std::size_t>(n), a[1])));
}
// [a, a + (b - a) ..] bounded by c; empty when the step moves away from c.
Status enum_from_then_to(const Value* a, Value& out, Interpreter& in) {
  __int128 from = I(a, 0), then = I(a, 1), to = I(a, 2);
  __int128 step = then - from;
  __int128 count;
  if (step >= 0) {
    if (from > to) return put(out, Value::empty_list());
    if (step == 0) return Status::BudgetExhausted;  // infinite list
    count = (to - from) / step + 1;
  } else {
    if (from < to) return put(out, Value::empty_list());
    count = (from - to) / (-step) + 1;
  }
  if (count > in.remaining()) return in.debit(in.remaining() + 1);
  if (Status s = in.debit(static_cast<I64>(count)); s != Status::Ok) return s;
  ValueList r;
  r.reserve(static_cast<std::size_t>(count));
  __int128 v = from;
  for (__int128 k = 0; k < count; ++k, v += step) r.push_back(Value::of_int(static_cast<I64>(v)));
  return put(out, Value::of_list(std::move(r)));
}
Status reverse_list(const Value* a, Value& out, Interpreter& in) {
  const ValueList& xs = a[0].as_list();
  if (Status s = charge(in, xs.size()); s != Status::Ok) return s;
  return put(out, Value::of_list(ValueList(xs.rbegin(), xs.rend())));
}
Status split_at(const Value* a, Value& out, Interpreter& in) {
  const ValueList& xs = a[1].as_list();
  if (Status s = charge(in, xs.size()); s != Status::Ok) return s;
  I64 n = std::clamp<I64>(I(a, 0), 0, static_cast<I64>(xs.size()));
  auto mid = xs.begin() + n;
  return put(out, Value::of_pair(Value::of_list(ValueList(xs.begin(), mid)),
                                 Value::of_list(ValueList(mid, xs.end()))));
}
Status intercalate_list(const Value* a, Value& out, Interpreter& in) {
  const ValueList& sep = a[0].as_list();
  const ValueList& parts = a[1].as_list();
  std::size_t n = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) n += parts[i].as_list().size() + (i ? sep.size() : 0);
  if (Status s = charge(in, n); s != Status::Ok) return s;
  ValueList r;
  r.reserve(n);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) r.insert(r.end(), sep.begin(), sep.end());
    const ValueList& p = parts[i].as_list();
    r.insert(r.end(), p.begin(), p.end());
  }
  return put(out, Value::of_list(std::move(r)));
}

Status fst_pair(const Value* a, Value& out, Interpreter&) { return put(out, a[0].as_pair().first); }
Status snd_pair(const Value* a, Value& out, Interpreter&) { return put(out, a[0].as_pair().second); }
Status mk_pair(const Value* a, Value& out, Interpreter&) { return put(out, Value::of_pair(a[0], a[1])); }

Status apply_fun(const Value* a, Value& out, Interpreter& in) { return in.apply(a[0], a[1], out); }

ValueMap map_insert(const ValueMap& m, const Value& k, const Value& v) {
  ValueMap r = m;
  auto it = std::lower_bound(r.begin(), r.end(), k,
                             [](const auto& kv, const Value& key) { return compare(kv.first, key) < 0; });
  if (it != r.end() && equal(it->first, k))
    it->second = v;
  else
    r.insert(it, {k, v});
  return r;
}

Status singleton_map(const Value* a, Value& out, Interpreter&) {
  return put(out, Value::of_map(ValueMap{{a[0], a[1]}}));
}
Status insert_map(const Value* a, Value& out, Interpreter&) {
  return put(out, Value::of_map(map_insert(a[2].as_map(), a[0], a[1])));
}
// The combining function receives (new, old).
Status insert_with_map(const Value* a, Value& out, Interpreter& in) {
  const ValueMap& m = a[3].as_map();
  auto it = std::lower_bound(m.begin(), m.end(), a[1],
                             [](const auto& kv, const Value& key) { return compare(kv.first, key) < 0; });
  Value v = a[2];
  if (it != m.end() && equal(it->first, a[1])) {
    Value combined;
    if (Status s = in.apply(a[0], Value::of_pair(a[2], it->second), combined); s != Status::Ok) return s;
    v = std::move(combined);
  }
  return put(out, Value::of_map(map_insert(m, a[1], v)));
}
Status from_list_map(const Value* a, Value& out, Interpreter& in) {
  const ValueList& kvs = a[0].as_list();
  if (Status s = charge(in, kvs.size()); s != Status::Ok) return s;
  std::vector<std::pair<Value, Value>> entries;
  entries.reserve(kvs.size());
  for (const Value& kv : kvs) entries.emplace_back(kv.as_pair().first, kv.as_pair().second);
  // Later keys win.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
  ValueMap r;
  for (auto& e : entries) {
    if (!r.empty() && equal(r.back().first, e.first))
      r.back().second = std::move(e.second);
    else
      r.push_back(std::move(e));
  }
  return put(out, Value::of_map(std::move(r)));
}

}  // namespace

Registry::Registry() {
  const char* i2 = "Int -> Int -> Int";
  add("addInt", i2, add_int);
  add("subInt", i2, sub_int);
  add("multInt", i2, mult_int);
  add("divInt", i2, div_int);
  add("quotInt", i2, quot_int);
  add("modInt", i2, mod_int);
  add("remInt", i2, rem_int);
  add("minInt", i2, min_int);
  add("maxInt", i2, max_int);
  add("absInt", "Int -> Int", abs_int);
  add("succInt", "Int -> Int", succ_int);
  add("predInt", "Int -> Int", pred_int);

  const char* f2 = "Float -> Float -> Float";
  add("addFloat", f2, add_float);
  add("subFloat", f2, sub_float);
  add("multFloat", f2, mult_float);
  add("divFloat", f2, div_float);
  add("minFloat", f2, min_float);
  add("maxFloat", f2, max_float);
  add("absFloat", "Float -> Float", abs_float);
  add("sqrt", "Float -> Float", sqrt_float);
  add("sin", "Float -> Float", sin_float);
  add("cos", "Float -> Float", cos_float);
  add("succFloat", "Float -> Float", succ_float);
  add("predFloat", "Float -> Float", pred_float);
  add("fromIntegral", "Int -> Float", from_integral);
  add("floor", "Float -> Int", floor_float);
  add("ceiling", "Float -> Int", ceiling_float);
  add("round", "Float -> Int", round_float);

  add("ltInt", "Int -> Int -> Bool", lt_int);
  add("gtInt", "Int -> Int -> Bool", gt_int);
  add("gteInt", "Int -> Int -> Bool", gte_int);
  add("lteInt", "Int -> Int -> Bool", lte_int);
  add("ltFloat", "Float -> Float -> Bool", lt_float);
  add("gtFloat", "Float -> Float -> Bool", gt_float);
  add("gteFloat", "Float -> Float -> Bool", gte_float);
  add("lteFloat", "Float -> Float -> Bool", lte_float);

  add("and", "Bool -> Bool -> Bool", and_bool);
  add("or", "Bool -> Bool -> Bool", or_bool);
  add("not", "Bool -> Bool", not_bool);
  add("if", "Bool -> a -> a -> a", if_then_else);
  if_id_ = by_name_.at("if");
  add("eq", "a -> a -> Bool", eq_any);
  add("neq", "a -> a -> Bool", neq_any);

  add("showInt", "Int -> [Char]", show_int);
  add("showFloat", "Float -> [Char]", show_float_prim);
  add("showBool", "Bool -> [Char]", show_bool);
  add("showChar", "Char -> [Char]", show_char);
  add("charToInt", "Char -> Int", char_to_int);
  add("intToChar", "Int -> Char", int_to_char);
  add("isLetter", "Char -> Bool", is_letter);
  add("isSpace", "Char -> Bool", is_space);
  add("isDigit", "Char -> Bool", is_digit);

  add("length", "[a] -> Int", length_list);
  add("cons", "a -> [a] -> [a]", cons_list);
  add("snoc", "a -> [a] -> [a]", snoc_list);
  add("mappend", "[a] -> [a] -> [a]", mappend_list, Cost::UnitPlusOutput);
  add("elem", "a -> [a] -> Bool", elem_list);
  add("delete", "a -> [a] -> [a]", delete_list);
  add("null", "[a] -> Bool", null_list);
  add("head", "[a] -> a", head_list);
  add("last", "[a] -> a", last_list);
  add("tail", "[a] -> [a]", tail_list);
  add("init", "[a] -> [a]", init_list);
  add("zip", "[a] -> [b] -> [(a, b)]", zip_list, Cost::UnitPlusOutput);
  add("replicate", "Int -> a -> [a]", replicate_list, Cost::UnitPlusOutput);
  add("enumFromThenTo", "Int -> Int -> Int -> [Int]", enum_from_then_to, Cost::UnitPlusOutput);
  add("reverse", "[a] -> [a]", reverse_list, Cost::UnitPlusOutput);
  add("splitAt", "Int -> [a] -> ([a], [a])", split_at, Cost::UnitPlusOutput);
  add("intercalate", "[a] -> [[a]] -> [a]", intercalate_list, Cost::UnitPlusOutput);

  add("fst", "(a, b) -> a", fst_pair);
  add("snd", "(a, b) -> b", snd_pair);
  add("mkPair", "a -> b -> (a, b)", mk_pair);

  add("apply", "(a -> b) -> a -> b", apply_fun);

  add("singleton", "a -> b -> Map a b", singleton_map);
  add("insert", "a -> b -> Map a b -> Map a b", insert_map);
  add("insertWith", "((b, b) -> b) -> a -> b -> Map a b -> Map a b", insert_with_map);
  add("fromList", "[(a, b)] -> Map a b", from_list_map, Cost::UnitPlusOutput);
}

void Registry::add(std::string name, std::string_view sig, PrimFn fn, Cost cost) {
  Primitive p;
  p.id = static_cast<PrimId>(prims_.size());
  p.name = std::move(name);
  SemType t = parse_type(sig);
  while (t.is(TypeKind::Fun)) {
    p.params.push_back(t.arg());
    t = t.ret();
  }
  p.ret = t;
  p.cost = cost;
  p.fn = fn;
  static const char* ordered[] = {"eq", "neq", "elem", "delete", "singleton", "insert", "insertWith", "fromList"};
  for (const char* o : ordered)
    if (p.name == o) p.compares_values = true;
  by_name_.emplace(p.name, p.id);
  prims_.push_back(std::move(p));
}

bool Primitive::admits(const Substitution& s) const {
  return !compares_values || !substitute(s, SemType::var("a")).contains_fun();
}

const Registry& Registry::standard() {
  static const Registry reg;
  return reg;
}

const Primitive* Registry::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? nullptr : &prims_[it->second];
}

std::vector<Candidate> Registry::enumerate(PrimId id, const Substitution& base, const TypeEnv& env,
                                           const std::vector<SemType>& universe) const {
  const Primitive& p = prims_[id];
  std::vector<std::string> open;
  for (const SemType& t : p.params) free_vars(substitute(base, t), open);
  free_vars(substitute(base, p.ret), open);

  std::vector<Candidate> out;
  std::vector<Substitution> partial{base};
  for (const std::string& v : open) {
    std::vector<Substitution> next;
    for (const Substitution& s : partial)
      for (const SemType& u : universe) {
        if (u.has_vars() || u.contains_fun()) continue;
        Substitution s2 = s;
        s2[v] = u;
        next.push_back(std::move(s2));
      }
    partial = std::move(next);
  }
  for (Substitution& s : partial) {
    bool ok = env.admits(substitute(s, p.ret));
    for (const SemType& t : p.params) ok = ok && env.admits(substitute(s, t));
    if (!p.admits(s)) ok = false;
    if (ok) out.push_back(Candidate{id, std::move(s)});
  }
  return out;
}

std::vector<Candidate> Registry::candidates_returning(SemType t, const TypeEnv& env) const {
  return candidates_returning(t, env, env.base_types());
}

std::vector<Candidate> Registry::candidates_returning(SemType t, const TypeEnv& env,
                                                      const std::vector<SemType>& universe) const {
  std::vector<Candidate> out;
  if (t.has_vars()) return out;
  for (const Primitive& p : prims_) {
    auto s = unify(p.ret, t);
    if (!s) continue;
    auto found = enumerate(p.id, *s, env, universe);
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  return out;
}

std::vector<Candidate> Registry::partial_candidates(SemType fn_type, const TypeEnv& env,
                                                    const std::vector<SemType>& universe) const {
  std::vector<Candidate> out;
  if (!fn_type.is(TypeKind::Fun) || fn_type.has_vars()) return out;
  for (const Primitive& p : prims_) {
    if (p.arity() == 0 || p.name == "apply") continue;
    auto s = unify(SemType::fun(p.params.back(), p.ret), fn_type);
    if (!s) continue;
    auto found = enumerate(p.id, *s, env, universe);
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  return out;
}

PrimResult eval_primitive(const Primitive& p, std::span<const Value> args) {
  if (args.size() != p.arity()) throw std::invalid_argument("wrong number of arguments for " + p.name);
  Interpreter in(Registry::standard(), kGlobalOps);
  PrimResult r{Status::Ok, Value()};
  r.status = in.debit(1);
  if (r.status == Status::Ok) r.status = p.fn(args.data(), r.value, in);
  return r;
}

}  // namespace origami
