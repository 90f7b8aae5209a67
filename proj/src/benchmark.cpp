#include "origami/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "origami/syntax.hpp"

namespace origami {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Metrics

std::size_t levenshtein(const ValueList& a, const ValueList& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (equal(a[i - 1], b[j - 1]) ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

double as_number(const Value& v) {
  return v.kind() == ValueKind::Int ? static_cast<double>(v.as_int()) : v.as_float();
}

double capped(double e) {
  if (std::isnan(e) || e > kPenalty) return kPenalty;
  return e;
}

}  // namespace

double FitnessMetric::operator()(const Value& expected, const Value& actual) const {
  switch (kind) {
    case MetricKind::AbsIntDiff:
      return capped(std::fabs(static_cast<double>(expected.as_int()) - static_cast<double>(actual.as_int())));
    case MetricKind::AbsFloatDiff: {
      double e = expected.as_float(), a = actual.as_float();
      if (e == a) return 0;
      double d = std::fabs(e - a);
      if (d < tolerance) return 0;
      return capped(d);
    }
    case MetricKind::BoolMismatch:
      return equal(expected, actual) ? 0 : 1;
    case MetricKind::Levenshtein:
      return capped(static_cast<double>(origami::levenshtein(expected.as_list(), actual.as_list())));
    case MetricKind::SeqNumDiff: {
      const ValueList& e = expected.as_list();
      const ValueList& a = actual.as_list();
      std::size_t n = std::min(e.size(), a.size());
      double err = 0;
      for (std::size_t i = 0; i < n && err < kPenalty; ++i) err += std::fabs(as_number(e[i]) - as_number(a[i]));
      err += length_penalty * static_cast<double>(std::max(e.size(), a.size()) - n);
      return capped(err);
    }
    case MetricKind::Composite:
      return capped(parts.at(0)(expected.as_pair().first, actual.as_pair().first) +
                    parts.at(1)(expected.as_pair().second, actual.as_pair().second));
  }
  return kPenalty;
}

double score_case(const FitnessMetric& m, const Value& expected, const EvalOutcome& outcome) {
  if (!outcome.ok()) return kPenalty;
  return m(expected, outcome.value);
}

double fitness(const std::vector<Expr>& slots, const PatternInstance& inst, const std::vector<Case>& cases,
               const FitnessMetric& m, const Limits& limits) {
  double total = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    EvalOutcome out = execute(inst, slots, cases[k].inputs, limits);
    if (out.status == Status::PerIterationBudget) {
      total += kPenalty * static_cast<double>(cases.size() - k);
      break;
    }
    total += score_case(m, cases[k].expected, out);
  }
  return total;
}

std::size_t test_errors(const std::vector<Expr>& slots, const PatternInstance& inst,
                        const std::vector<Case>& cases, const FitnessMetric& m, const Limits& limits) {
  std::size_t errors = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    EvalOutcome out = execute(inst, slots, cases[k].inputs, limits);
    if (out.status == Status::PerIterationBudget) return errors + (cases.size() - k);
    if (score_case(m, cases[k].expected, out) != 0) ++errors;
  }
  return errors;
}

SemType Problem::unbound_for(PatternKind k) const {
  auto it = unbound.find(k);
  return it == unbound.end() ? SemType::int_type() : it->second;
}

// ---------------------------------------------------------------------------
// Problem registry

namespace {

using Inputs = Problem::Inputs;

std::int64_t ri(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

double rf(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

const std::string& printable() {
  static const std::string s = [] {
    std::string a = "\n\t";
    for (char c = 32; c < 127; ++c) a += c;
    return a;
  }();
  return s;
}

std::string rstr(Rng& rng, std::size_t lo, std::size_t hi, const std::string& alphabet) {
  auto n = static_cast<std::size_t>(ri(rng, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += alphabet[static_cast<std::size_t>(ri(rng, 0, static_cast<std::int64_t>(alphabet.size()) - 1))];
  return s;
}

Value ints(const std::vector<std::int64_t>& xs) {
  ValueList v;
  for (auto x : xs) v.push_back(Value::of_int(x));
  return Value::of_list(std::move(v));
}

Value rints(Rng& rng, std::size_t lo, std::size_t hi, std::int64_t vlo, std::int64_t vhi) {
  auto n = ri(rng, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi));
  std::vector<std::int64_t> xs;
  for (std::int64_t i = 0; i < n; ++i) xs.push_back(ri(rng, vlo, vhi));
  return ints(xs);
}

std::vector<std::int64_t> to_ints(const Value& v) {
  std::vector<std::int64_t> out;
  for (const Value& x : v.as_list()) out.push_back(x.as_int());
  return out;
}

Value str(std::string_view s) { return Value::of_string(s); }
Value i64(std::int64_t i) { return Value::of_int(i); }

SemType I() { return SemType::int_type(); }
SemType F() { return SemType::float_type(); }
SemType S() { return SemType::string_type(); }

constexpr TypeKind kInt = TypeKind::Int, kFloat = TypeKind::Float, kBool = TypeKind::Bool, kChar = TypeKind::Char,
                   kList = TypeKind::List, kPair = TypeKind::Pair;

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? r + b : r;
}

std::vector<Problem> build() {
  std::vector<Problem> ps;
  auto add = [&](Problem p) { ps.push_back(std::move(p)); };

  {
    Problem p;
    p.name = "number-io";
    p.sig = {{I(), F()}, F()};
    p.env = {kInt, kFloat};
    p.sampler = [](Rng& r) { return Inputs{i64(ri(r, -100, 100)), Value::of_float(rf(r, -100, 100))}; };
    p.oracle = [](const Inputs& in) {
      return Value::of_float(static_cast<double>(in[0].as_int()) + in[1].as_float());
    };
    p.edge_cases = {{i64(0), Value::of_float(0)}, {i64(-100), Value::of_float(-100)}, {i64(100), Value::of_float(100)}};
    p.n_train = 25;
    p.n_test = 1000;
    p.metric = FitnessMetric::abs_float(1e-4);
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "small-or-large";
    p.sig = {{I()}, S()};
    p.env = {kInt, kBool, kChar, kList};
    p.pool.ints.insert(p.pool.ints.end(), {1000, 2000});
    p.pool.strings = {U"small", U"large"};
    p.sampler = [](Rng& r) { return Inputs{i64(ri(r, -10000, 10000))}; };
    p.oracle = [](const Inputs& in) {
      std::int64_t n = in[0].as_int();
      return str(n < 1000 ? "small" : n >= 2000 ? "large" : "");
    };
    for (std::int64_t n : {-10000, 0, 980, 999, 1000, 1020, 1980, 1999, 2000, 2020, 10000})
      p.edge_cases.push_back({i64(n)});
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::levenshtein();
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "smallest";
    p.sig = {{I(), I(), I(), I()}, I()};
    p.env = {kInt, kBool};
    p.sampler = [](Rng& r) {
      Inputs in;
      for (int k = 0; k < 4; ++k) in.push_back(i64(ri(r, -100, 100)));
      return in;
    };
    p.oracle = [](const Inputs& in) {
      std::int64_t m = in[0].as_int();
      for (const Value& v : in) m = std::min(m, v.as_int());
      return i64(m);
    };
    for (auto q : std::vector<std::vector<std::int64_t>>{{0, 0, 0, 0},
                                                         {-100, -100, -100, -100},
                                                         {100, 100, 100, 100},
                                                         {-44, 12, 13, 14},
                                                         {12, -44, 13, 14},
                                                         {12, 13, -44, 14},
                                                         {12, 13, 14, -44},
                                                         {100, 99, 98, 97},
                                                         {97, 98, 99, 100}}) {
      Inputs in;
      for (auto x : q) in.push_back(i64(x));
      p.edge_cases.push_back(in);
    }
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::abs_int();
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "median";
    p.sig = {{I(), I(), I()}, I()};
    p.env = {kInt, kBool};
    p.sampler = [](Rng& r) {
      Inputs in;
      // Duplicated values are common in the original benchmark data.
      std::int64_t a = ri(r, -100, 100), b = ri(r, -100, 100), c = ri(r, -100, 100);
      if (ri(r, 0, 9) == 0) b = a;
      in = {i64(a), i64(b), i64(c)};
      std::shuffle(in.begin(), in.end(), r);
      return in;
    };
    p.oracle = [](const Inputs& in) {
      std::vector<std::int64_t> v{in[0].as_int(), in[1].as_int(), in[2].as_int()};
      std::sort(v.begin(), v.end());
      return i64(v[1]);
    };
    for (auto q : std::vector<std::vector<std::int64_t>>{{0, 0, 0},
                                                         {100, 100, 100},
                                                         {-100, -100, -100},
                                                         {1, 2, 3},
                                                         {3, 1, 2},
                                                         {2, 3, 1},
                                                         {-100, 0, 100},
                                                         {100, -100, 0}}) {
      Inputs in;
      for (auto x : q) in.push_back(i64(x));
      p.edge_cases.push_back(in);
    }
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::abs_int();
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "compare-string-lengths";
    p.sig = {{S(), S(), S()}, SemType::bool_type()};
    p.env = {kInt, kBool, kChar, kList};
    p.sampler = [](Rng& r) {
      Inputs in;
      if (ri(r, 0, 3) == 0) {
        // Force the increasing case, which random strings rarely hit.
        std::vector<std::size_t> n{static_cast<std::size_t>(ri(r, 0, 47)), 0, 0};
        n[1] = n[0] + static_cast<std::size_t>(ri(r, 1, 48 - static_cast<std::int64_t>(n[0])));
        n[2] = n[1] + static_cast<std::size_t>(ri(r, 1, 49 - static_cast<std::int64_t>(n[1])));
        for (auto k : n) in.push_back(str(rstr(r, k, k, printable())));
      } else {
        for (int k = 0; k < 3; ++k) in.push_back(str(rstr(r, 0, 49, printable())));
      }
      return in;
    };
    p.oracle = [](const Inputs& in) {
      auto a = in[0].as_list().size(), b = in[1].as_list().size(), c = in[2].as_list().size();
      return Value::of_bool(a < b && b < c);
    };
    for (auto q : std::vector<std::vector<std::string>>{{"", "", ""},
                                                        {"", "a", "bc"},
                                                        {"a", "", "bc"},
                                                        {"abc", "ab", "a"},
                                                        {"a", "b", "c"},
                                                        {"", "", "a"},
                                                        {"a", "bb", "bb"}}) {
      Inputs in;
      for (auto& s : q) in.push_back(str(s));
      p.edge_cases.push_back(in);
    }
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::bool_mismatch();
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "mirror-image";
    p.sig = {{SemType::list(I()), SemType::list(I())}, SemType::bool_type()};
    p.env = {kInt, kBool, kList};
    p.sampler = [](Rng& r) {
      Value a = rints(r, 0, 50, -1000, 1000);
      auto xs = to_ints(a);
      std::vector<std::int64_t> ys(xs.rbegin(), xs.rend());
      switch (ri(r, 0, 3)) {
        case 0:
        case 1:
          break;
        case 2:
          if (!ys.empty()) ys[static_cast<std::size_t>(ri(r, 0, static_cast<std::int64_t>(ys.size()) - 1))] += ri(r, 1, 5);
          break;
        default:
          return Inputs{a, rints(r, xs.size(), xs.size(), -1000, 1000)};
      }
      return Inputs{a, ints(ys)};
    };
    p.oracle = [](const Inputs& in) {
      auto a = to_ints(in[0]), b = to_ints(in[1]);
      return Value::of_bool(std::equal(a.rbegin(), a.rend(), b.begin(), b.end()));
    };
    p.edge_cases = {{ints({}), ints({})},           {ints({1}), ints({1})},         {ints({0}), ints({1})},
                    {ints({1, 2}), ints({2, 1})},   {ints({1, 2}), ints({1, 2})},   {ints({1, 1}), ints({1, 1})},
                    {ints({1, 2, 3}), ints({3, 2, 1})}, {ints({1, 2, 3}), ints({3, 2})}};
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::bool_mismatch();
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "count-odds";
    p.sig = {{SemType::list(I())}, I()};
    p.env = {kInt, kBool, kList};
    p.sampler = [](Rng& r) { return Inputs{rints(r, 0, 50, -1000, 1000)}; };
    p.oracle = [](const Inputs& in) {
      std::int64_t n = 0;
      for (auto x : to_ints(in[0])) n += (x % 2 != 0);
      return i64(n);
    };
    p.edge_cases = {{ints({})}};
    for (std::int64_t v = -10; v <= 10; ++v) p.edge_cases.push_back({ints({v})});
    for (auto xs : std::vector<std::vector<std::int64_t>>{
             {-947}, {-450}, {303}, {886}, {0, 0}, {0, 1}, {7, 1}, {-9, -1}, {-11, 40}, {944, 77}})
      p.edge_cases.push_back({ints(xs)});
    p.n_train = 200;
    p.n_test = 2000;
    p.metric = FitnessMetric::abs_int();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "negative-to-zero";
    p.sig = {{SemType::list(I())}, SemType::list(I())};
    p.env = {kInt, kBool, kList};
    p.sampler = [](Rng& r) { return Inputs{rints(r, 0, 50, -1000, 1000)}; };
    p.oracle = [](const Inputs& in) {
      auto xs = to_ints(in[0]);
      for (auto& x : xs) x = std::max<std::int64_t>(x, 0);
      return ints(xs);
    };
    p.edge_cases = {{ints({})}, {ints({-10})}, {ints({-1})}, {ints({0})}, {ints({1})}, {ints({10})},
                    {ints({0, 0})}, {ints({-5, 5})}, {ints({5, -5})}, {ints({-3, -2, -1})}};
    p.n_train = 200;
    p.n_test = 2000;
    p.metric = FitnessMetric::seq_num_diff();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "scrabble-score";
    p.sig = {{S()}, I()};
    p.env = {kInt, kBool, kChar, kList};
    p.sampler = [](Rng& r) { return Inputs{str(rstr(r, 0, 20, printable()))}; };
    p.oracle = [](const Inputs& in) {
      static const int score[26] = {1, 3, 3, 2, 1, 4, 2, 4, 1, 8, 5, 1, 3, 1, 1, 3, 10, 1, 1, 1, 1, 4, 4, 8, 4, 10};
      std::int64_t total = 0;
      for (const Value& c : in[0].as_list()) {
        char32_t ch = c.as_char();
        if (ch >= 'a' && ch <= 'z') total += score[ch - 'a'];
        if (ch >= 'A' && ch <= 'Z') total += score[ch - 'A'];
      }
      return i64(total);
    };
    for (std::string s : {"", "a", "z", "A", "Z", "quiz", "zzzz", "hello world", "!@#"}) p.edge_cases.push_back({str(s)});
    p.n_train = 200;
    p.n_test = 1000;
    p.metric = FitnessMetric::abs_int();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "last-index-of-zero";
    p.sig = {{SemType::list(I())}, I()};
    p.env = {kInt, kBool, kList};
    p.sampler = [](Rng& r) {
      auto xs = to_ints(rints(r, 1, 50, -50, 50));
      auto zeros = ri(r, 1, std::max<std::int64_t>(1, static_cast<std::int64_t>(xs.size()) / 4));
      for (std::int64_t z = 0; z < zeros; ++z) xs[static_cast<std::size_t>(ri(r, 0, static_cast<std::int64_t>(xs.size()) - 1))] = 0;
      return Inputs{ints(xs)};
    };
    p.oracle = [](const Inputs& in) {
      auto xs = to_ints(in[0]);
      std::int64_t last = -1;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] == 0) last = static_cast<std::int64_t>(i);
      return i64(last);
    };
    p.edge_cases = {{ints({0})}, {ints({0, 0})}, {ints({0, 1})}, {ints({1, 0})}, {ints({0, 5, 0})}, {ints({-3, 0, 2, 9})}};
    p.n_train = 150;
    p.n_test = 1000;
    p.metric = FitnessMetric::abs_int();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    // Thresholds for A, B, C and D (strictly decreasing) and a score.
    Problem p;
    p.name = "grade";
    p.sig = {{SemType::list(I()), I()}, SemType::char_type()};
    p.env = {kInt, kBool, kChar};
    p.pool.ints.push_back(65);
    p.pool.chars.insert(p.pool.chars.end(), {'B', 'C', 'D', 'F'});
    p.sampler = [](Rng& r) {
      std::set<std::int64_t> th;
      while (th.size() < 4) th.insert(ri(r, 0, 100));
      std::vector<std::int64_t> t(th.rbegin(), th.rend());
      return Inputs{ints(t), i64(ri(r, 0, 100))};
    };
    p.oracle = [](const Inputs& in) {
      auto t = to_ints(in[0]);
      std::int64_t s = in[1].as_int();
      for (std::size_t k = 0; k < t.size(); ++k)
        if (s >= t[k]) return Value::of_char(static_cast<char32_t>('A' + k));
      return Value::of_char('F');
    };
    p.edge_cases.clear();
    const std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> groups = {
        {{80, 70, 60, 50}, {85, 80, 79, 75, 70, 69, 65, 60, 59, 55, 50, 49, 45}},
        {{90, 80, 70, 60}, {100, 0}},
        {{4, 3, 2, 1}, {5, 4, 3, 2, 1, 0}},
        {{100, 99, 98, 97}, {100, 99, 98, 97, 96}},
        {{98, 48, 27, 3}, {55, 14, 1}},
        {{45, 30, 27, 0}, {1, 0}},
        {{48, 46, 44, 42}, {40, 41, 42, 43, 44, 45, 46, 47, 48, 49}}};
    for (const auto& [th, scores] : groups)
      for (std::int64_t s : scores) p.edge_cases.push_back({ints(th), i64(s)});
    p.n_train = 200;
    p.n_test = 2000;
    p.metric = FitnessMetric::bool_mismatch();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "string-lengths-backwards";
    p.sig = {{SemType::list(S())}, SemType::list(I())};
    p.env = {kInt, kBool, kChar, kList};
    p.sampler = [](Rng& r) {
      ValueList v;
      auto n = ri(r, 0, 50);
      for (std::int64_t i = 0; i < n; ++i) v.push_back(str(rstr(r, 0, 50, printable())));
      return Inputs{Value::of_list(std::move(v))};
    };
    p.oracle = [](const Inputs& in) {
      std::vector<std::int64_t> out;
      for (const Value& s : in[0].as_list()) out.push_back(static_cast<std::int64_t>(s.as_list().size()));
      std::reverse(out.begin(), out.end());
      return ints(out);
    };
    auto strs = [](std::vector<std::string> xs) {
      ValueList v;
      for (auto& s : xs) v.push_back(str(s));
      return Inputs{Value::of_list(std::move(v))};
    };
    p.edge_cases = {strs({}), strs({""}), strs({"", ""}), strs({"a"}), strs({"abc", ""}), strs({"", "abc"})};
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::seq_num_diff();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "double-letters";
    p.sig = {{S()}, S()};
    p.env = {kInt, kBool, kChar, kList};
    p.sampler = [](Rng& r) { return Inputs{str(rstr(r, 0, 20, printable()))}; };
    p.oracle = [](const Inputs& in) {
      std::u32string out;
      for (const Value& c : in[0].as_list()) {
        char32_t ch = c.as_char();
        bool letter = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z');
        int times = letter ? 2 : ch == '!' ? 3 : 1;
        out.append(static_cast<std::size_t>(times), ch);
      }
      return Value::of_string(std::u32string_view(out));
    };
    for (std::string s : {"", "A", "!", " ", "*", "\t", "\n", "B\n", "\n\n", "CD", "ef", "!!", "q!", "!R", "!#", "@!", "!F!", "T$L", "4ps", "_5", "9#"})
      p.edge_cases.push_back({str(s)});
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::levenshtein();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    // Output reduced to the vowel count (the original prints a sentence).
    Problem p;
    p.name = "syllables";
    p.sig = {{S()}, I()};
    p.env = {kInt, kBool, kChar, kList};
    p.pool.chars.insert(p.pool.chars.end(), {'e', 'i', 'o', 'u', 'y'});
    p.sampler = [](Rng& r) { return Inputs{str(rstr(r, 0, 20, "aeiouybcdfghjklmnpqrstvwxz0123456789 !@#$%^&*"))}; };
    p.oracle = [](const Inputs& in) {
      std::int64_t n = 0;
      for (const Value& c : in[0].as_list()) n += std::u32string_view(U"aeiouy").find(c.as_char()) != std::u32string_view::npos;
      return i64(n);
    };
    for (std::string s : {"", "a", "v", "4", "o", " ", "aei", "ouy", "chf", "quite", "a r e9j>", "you are many yay yea"})
      p.edge_cases.push_back({str(s)});
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::abs_int();
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "replace-space-with-newline";
    p.sig = {{S()}, SemType::pair(S(), I())};
    p.env = {kInt, kBool, kChar, kList, kPair};
    p.sampler = [](Rng& r) {
      std::string alphabet = printable();
      alphabet += "    ";
      return Inputs{str(rstr(r, 0, 20, alphabet))};
    };
    p.oracle = [](const Inputs& in) {
      std::u32string out;
      std::int64_t n = 0;
      for (const Value& c : in[0].as_list()) {
        char32_t ch = c.as_char();
        if (ch == ' ') {
          out += U'\n';
        } else {
          out += ch;
          ++n;
        }
      }
      return Value::of_pair(Value::of_string(std::u32string_view(out)), i64(n));
    };
    for (std::string s : {"", "A", "*", " ", "s", "B ", "  ", " D", "ef", "!!", " F ", "T L", "4ps", "q  ", "   ", "  e", "hi "})
      p.edge_cases.push_back({str(s)});
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::composite(FitnessMetric::levenshtein(), FitnessMetric::abs_int());
    p.canonical = PatternKind::Cata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "super-anagrams";
    p.sig = {{S(), S()}, SemType::bool_type()};
    p.env = {kInt, kBool, kChar, kList};
    p.sampler = [](Rng& r) {
      std::string b = rstr(r, 0, 20, "abcdefghijklmnopqrstuvwxyz");
      std::string a;
      if (ri(r, 0, 1) == 0) {
        a = b;
        std::shuffle(a.begin(), a.end(), r);
        a.resize(static_cast<std::size_t>(ri(r, 0, static_cast<std::int64_t>(a.size()))));
        if (ri(r, 0, 2) == 0) a += static_cast<char>('a' + ri(r, 0, 25));
      } else {
        a = rstr(r, 0, 20, "abcdefghijklmnopqrstuvwxyz");
      }
      return Inputs{str(a), str(b)};
    };
    p.oracle = [](const Inputs& in) {
      std::map<char32_t, int> have;
      for (const Value& c : in[1].as_list()) ++have[c.as_char()];
      for (const Value& c : in[0].as_list())
        if (--have[c.as_char()] < 0) return Value::of_bool(false);
      return Value::of_bool(true);
    };
    for (auto q : std::vector<std::pair<std::string, std::string>>{{"", ""}, {"", "a"}, {"a", ""}, {"a", "a"},
                                                                     {"a", "b"}, {"ab", "ba"}, {"aa", "a"},
                                                                     {"abc", "cba"}, {"abc", "abcd"}, {"abcd", "abc"}})
      p.edge_cases.push_back({str(q.first), str(q.second)});
    p.n_train = 200;
    p.n_test = 2000;
    p.metric = FitnessMetric::bool_mismatch();
    p.canonical = PatternKind::CurriedCata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "vectors-summed";
    p.sig = {{SemType::list(I()), SemType::list(I())}, SemType::list(I())};
    p.env = {kInt, kBool, kList};
    p.sampler = [](Rng& r) {
      auto n = static_cast<std::size_t>(ri(r, 0, 50));
      return Inputs{rints(r, n, n, -1000, 1000), rints(r, n, n, -1000, 1000)};
    };
    p.oracle = [](const Inputs& in) {
      auto a = to_ints(in[0]), b = to_ints(in[1]);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
      return ints(a);
    };
    p.edge_cases = {{ints({}), ints({})}, {ints({0}), ints({0})}, {ints({1}), ints({-1})},
                    {ints({1000}), ints({1000})}, {ints({1, 2, 3}), ints({4, 5, 6})}};
    p.n_train = 150;
    p.n_test = 1500;
    p.metric = FitnessMetric::seq_num_diff();
    p.canonical = PatternKind::CurriedCata;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "for-loop-index";
    p.sig = {{I(), I(), I()}, SemType::list(I())};
    p.env = {kInt, kBool, kList};
    p.sampler = [](Rng& r) {
      std::int64_t start = ri(r, -500, 500);
      std::int64_t step = ri(r, 1, 10);
      std::int64_t end = start + ri(r, 1, 20) * step - ri(r, 0, step - 1);
      return Inputs{i64(start), i64(end), i64(step)};
    };
    p.oracle = [](const Inputs& in) {
      std::vector<std::int64_t> out;
      for (std::int64_t i = in[0].as_int(); i < in[1].as_int(); i += in[2].as_int()) out.push_back(i);
      return ints(out);
    };
    p.edge_cases = {{i64(0), i64(1), i64(1)}, {i64(0), i64(10), i64(1)}, {i64(-5), i64(5), i64(2)},
                    {i64(0), i64(10), i64(10)}, {i64(3), i64(4), i64(9)}};
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::seq_num_diff();
    p.canonical = PatternKind::Ana;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "even-squares";
    p.sig = {{I()}, SemType::list(I())};
    p.env = {kInt, kBool, kList};
    p.sampler = [](Rng& r) { return Inputs{i64(ri(r, 1, 9999))}; };
    p.oracle = [](const Inputs& in) {
      std::vector<std::int64_t> out;
      for (std::int64_t k = 2; k * k < in[0].as_int(); k += 2) out.push_back(k * k);
      return ints(out);
    };
    for (std::int64_t n : {1, 2, 3, 4, 5, 15, 16, 17, 36, 37, 9999}) p.edge_cases.push_back({i64(n)});
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::seq_num_diff();
    p.canonical = PatternKind::Ana;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "vector-average";
    p.sig = {{SemType::list(F())}, F()};
    p.env = {kInt, kFloat, kBool, kList, kPair};
    p.unbound = {{PatternKind::Accu, SemType::pair(F(), I())}};
    p.sampler = [](Rng& r) {
      ValueList v;
      auto n = ri(r, 1, 50);
      for (std::int64_t i = 0; i < n; ++i) v.push_back(Value::of_float(rf(r, -1000, 1000)));
      return Inputs{Value::of_list(std::move(v))};
    };
    p.oracle = [](const Inputs& in) {
      double sum = 0;
      for (const Value& x : in[0].as_list()) sum += x.as_float();
      return Value::of_float(sum / static_cast<double>(in[0].as_list().size()));
    };
    auto fl = [](std::vector<double> xs) {
      ValueList v;
      for (double d : xs) v.push_back(Value::of_float(d));
      return Inputs{Value::of_list(std::move(v))};
    };
    p.edge_cases = {fl({0}), fl({1000}), fl({-1000}), fl({2, 4}), fl({-1, 1}), fl({1000, -1000, 500})};
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::abs_float(1e-3);
    p.canonical = PatternKind::Accu;
    add(std::move(p));
  }
  {
    // Output reduced to the checksum character.
    Problem p;
    p.name = "checksum";
    p.sig = {{S()}, S()};
    p.env = {kInt, kBool, kChar, kList};
    p.pool.ints.insert(p.pool.ints.end(), {32, 64});
    p.unbound = {{PatternKind::Accu, I()}, {PatternKind::Hylo, I()}};
    p.sampler = [](Rng& r) { return Inputs{str(rstr(r, 0, 50, printable()))}; };
    p.oracle = [](const Inputs& in) {
      std::int64_t sum = 0;
      for (const Value& c : in[0].as_list()) sum += static_cast<std::int64_t>(c.as_char());
      return str(std::string(1, static_cast<char>(floor_mod(sum, 64) + 32)));
    };
    for (std::string s : {"", "A", "\t", "\n", "B\n", "\n\n", "!", "~", "~~", "  ", "hello world"}) p.edge_cases.push_back({str(s)});
    p.n_train = 100;
    p.n_test = 1000;
    p.metric = FitnessMetric::levenshtein();
    p.canonical = PatternKind::Accu;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "sum-of-squares";
    p.sig = {{I()}, I()};
    p.env = {kInt, kBool, kList};
    p.unbound = {{PatternKind::Hylo, I()}};
    p.sampler = [](Rng& r) { return Inputs{i64(ri(r, 1, 100))}; };
    p.oracle = [](const Inputs& in) {
      std::int64_t n = in[0].as_int(), s = 0;
      for (std::int64_t k = 1; k <= n; ++k) s += k * k;
      return i64(s);
    };
    for (std::int64_t n : {1, 2, 3, 4, 5, 6, 100}) p.edge_cases.push_back({i64(n)});
    p.n_train = 50;
    p.n_test = 50;
    p.metric = FitnessMetric::abs_int();
    p.canonical = PatternKind::Hylo;
    add(std::move(p));
  }
  {
    Problem p;
    p.name = "collatz-numbers";
    p.sig = {{I()}, I()};
    p.env = {kInt, kBool, kList};
    p.unbound = {{PatternKind::Hylo, I()}};
    p.sampler = [](Rng& r) { return Inputs{i64(ri(r, 1, 10000))}; };
    p.oracle = [](const Inputs& in) {
      std::int64_t n = in[0].as_int(), terms = 1;
      while (n != 1) {
        n = n % 2 == 0 ? n / 2 : 3 * n + 1;
        ++terms;
      }
      return i64(terms);
    };
    for (std::int64_t n : {1, 2, 3, 4, 5, 6, 7, 8, 9, 97, 871, 6171}) p.edge_cases.push_back({i64(n)});
    p.n_train = 200;
    p.n_test = 2000;
    p.metric = FitnessMetric::abs_int();
    p.canonical = PatternKind::Hylo;
    add(std::move(p));
  }

  std::sort(ps.begin(), ps.end(), [](const Problem& a, const Problem& b) { return a.name < b.name; });
  return ps;
}

}  // namespace

const std::vector<Problem>& problems() {
  static const std::vector<Problem> ps = build();
  return ps;
}

const Problem* find_problem(std::string_view name) {
  for (const Problem& p : problems())
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> problem_names() {
  std::vector<std::string> out;
  for (const Problem& p : problems()) out.push_back(p.name);
  return out;
}

// ---------------------------------------------------------------------------
// Datasets

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string inputs_key(const Inputs& in) {
  std::string k;
  for (const Value& v : in) k += render_value(v) + "\x1f";
  return k;
}

}  // namespace

Dataset materialize(const Problem& p, std::uint64_t seed, std::optional<int> n_train, std::optional<int> n_test) {
  Rng rng(seed ^ fnv1a(p.name));
  Dataset d;
  d.problem = p.name;
  d.seed = seed;
  d.sig = p.sig;
  const auto train_n = std::max<std::size_t>(static_cast<std::size_t>(std::max(0, n_train.value_or(p.n_train))), p.edge_cases.size());
  const auto test_n = static_cast<std::size_t>(std::max(0, n_test.value_or(p.n_test)));

  std::set<std::string> seen;
  for (const Inputs& in : p.edge_cases) {
    d.train.push_back({in, p.oracle(in)});
    seen.insert(inputs_key(in));
  }
  while (d.train.size() < train_n) {
    Inputs in = p.sampler(rng);
    seen.insert(inputs_key(in));
    Value out = p.oracle(in);
    d.train.push_back({std::move(in), std::move(out)});
  }
  while (d.test.size() < test_n) {
    Inputs in = p.sampler(rng);
    // Keep test inputs apart from training inputs when the domain allows it.
    for (int attempt = 0; attempt < 100 && seen.count(inputs_key(in)); ++attempt) in = p.sampler(rng);
    Value out = p.oracle(in);
    d.test.push_back({std::move(in), std::move(out)});
  }
  return d;
}

namespace {

json to_json(const Value& v, SemType t) {
  switch (t.kind()) {
    case TypeKind::Int:
      return v.as_int();
    case TypeKind::Float: {
      double f = v.as_float();
      if (std::isnan(f)) return "NaN";
      if (std::isinf(f)) return f > 0 ? "Infinity" : "-Infinity";
      return f;
    }
    case TypeKind::Bool:
      return v.as_bool();
    case TypeKind::Char:
      return to_utf8(std::u32string(1, v.as_char()));
    case TypeKind::List: {
      if (t.is_string()) return v.as_utf8();
      json a = json::array();
      for (const Value& e : v.as_list()) a.push_back(to_json(e, t.elem()));
      return a;
    }
    case TypeKind::Pair:
      return json::array({to_json(v.as_pair().first, t.first()), to_json(v.as_pair().second, t.second())});
    case TypeKind::Map: {
      json a = json::array();
      for (const auto& [k, x] : v.as_map()) a.push_back(json::array({to_json(k, t.key()), to_json(x, t.val())}));
      return a;
    }
    default:
      break;
  }
  throw std::invalid_argument("cannot serialize values of type " + t.str());
}

Value from_json(const json& j, SemType t) {
  switch (t.kind()) {
    case TypeKind::Int:
      return Value::of_int(j.get<std::int64_t>());
    case TypeKind::Float:
      if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "NaN") return Value::of_float(std::nan(""));
        return Value::of_float(s == "Infinity" ? HUGE_VAL : -HUGE_VAL);
      }
      return Value::of_float(j.get<double>());
    case TypeKind::Bool:
      return Value::of_bool(j.get<bool>());
    case TypeKind::Char: {
      std::u32string s = from_utf8(j.get<std::string>());
      if (s.size() != 1) throw std::invalid_argument("expected a single character");
      return Value::of_char(s[0]);
    }
    case TypeKind::List: {
      if (t.is_string()) return Value::of_string(std::string_view(j.get<std::string>()));
      ValueList v;
      for (const json& e : j) v.push_back(from_json(e, t.elem()));
      return Value::of_list(std::move(v));
    }
    case TypeKind::Pair:
      return Value::of_pair(from_json(j.at(0), t.first()), from_json(j.at(1), t.second()));
    case TypeKind::Map: {
      ValueMap m;
      for (const json& e : j) m.emplace_back(from_json(e.at(0), t.key()), from_json(e.at(1), t.val()));
      std::sort(m.begin(), m.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
      return Value::of_map(std::move(m));
    }
    default:
      break;
  }
  throw std::invalid_argument("cannot deserialize values of type " + t.str());
}

}  // namespace

void write_dataset(std::ostream& os, const Dataset& d) {
  json header = {{"problem", d.problem}, {"seed", d.seed}, {"signature", d.sig.str()},
                 {"train", d.train.size()}, {"test", d.test.size()}};
  os << header.dump() << '\n';
  auto emit = [&](const std::vector<Case>& cases, const char* split) {
    for (const Case& c : cases) {
      json in = json::array();
      for (std::size_t i = 0; i < c.inputs.size(); ++i) in.push_back(to_json(c.inputs[i], d.sig.args[i]));
      json rec = {{"split", split}, {"input", std::move(in)}, {"output", to_json(c.expected, d.sig.out)}};
      os << rec.dump() << '\n';
    }
  };
  emit(d.train, "train");
  emit(d.test, "test");
}

Dataset read_dataset(std::istream& is) {
  Dataset d;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line);
    if (!have_header) {
      d.problem = j.at("problem").get<std::string>();
      d.seed = j.at("seed").get<std::uint64_t>();
      d.sig = parse_signature(j.at("signature").get<std::string>());
      have_header = true;
      continue;
    }
    Case c;
    const json& in = j.at("input");
    if (in.size() != d.sig.args.size()) throw std::invalid_argument("case has the wrong number of inputs");
    for (std::size_t i = 0; i < in.size(); ++i) c.inputs.push_back(from_json(in[i], d.sig.args[i]));
    c.expected = from_json(j.at("output"), d.sig.out);
    (j.value("split", "train") == "test" ? d.test : d.train).push_back(std::move(c));
  }
  if (!have_header) throw std::invalid_argument("dataset has no header record");
  return d;
}

}  // namespace origami
