#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "origami/interpreter.hpp"
#include "support.hpp"

using namespace test;

namespace {

const Registry& reg() { return Registry::standard(); }

PrimResult call(std::string_view name, std::vector<Value> args) {
  return eval_primitive(*reg().find(name), args);
}

Value ok(std::string_view name, std::vector<Value> args) {
  PrimResult r = call(name, std::move(args));
  REQUIRE_MESSAGE(r.status == Status::Ok, name);
  return r.value;
}

std::set<std::string> names_of(const std::vector<Candidate>& cs) {
  std::set<std::string> out;
  for (const Candidate& c : cs) out.insert(reg().at(c.prim).name);
  return out;
}

bool has_instance(const std::vector<Candidate>& cs, std::string_view name, SemType a) {
  for (const Candidate& c : cs)
    if (reg().at(c.prim).name == name && c.subst.count("a") && c.subst.at("a") == a) return true;
  return false;
}

std::vector<std::string> vars_of(SemType t) {
  std::vector<std::string> v;
  free_vars(t, v);
  return v;
}

}  // namespace

TEST_CASE("registry holds the fixed operation set") {
  for (const char* n : {"addInt", "subInt", "multInt", "divInt", "addFloat", "divFloat", "ltInt", "gteFloat", "and",
                        "or", "not", "if", "eq", "neq", "showInt", "showFloat", "charToInt", "intToChar",
                        "isLetter", "isSpace", "isDigit", "fst", "snd", "mkPair", "apply", "singleton", "insert",
                        "insertWith", "fromList"})
    CHECK_MESSAGE(reg().find(n) != nullptr, n);
  const std::vector<std::string> list_ops = {"length", "cons",    "snoc",      "mappend",   "elem",
                                             "delete", "null",    "head",      "last",      "tail",
                                             "init",   "zip",     "replicate", "enumFromThenTo",
                                             "reverse", "splitAt", "intercalate"};
  CHECK(list_ops.size() == 17);
  for (const std::string& n : list_ops) CHECK_MESSAGE(reg().find(n) != nullptr, n);
  for (const char* n : {"map", "filter", "sum", "product", "foldr", "foldl"}) CHECK(reg().find(n) == nullptr);
}

TEST_CASE("signature lookups") {
  CHECK(reg().find("divInt")->as_type().str() == "Int -> Int -> Int");
  CHECK(reg().find("if")->as_type().str() == "Bool -> a -> a -> a");
  CHECK(reg().find("insertWith")->as_type() == parse_type("((b, b) -> b) -> a -> b -> Map a b -> Map a b"));
}

TEST_CASE("primitive ids are unique and stable") {
  std::set<std::string> seen;
  for (std::size_t k = 0; k < reg().size(); ++k) {
    CHECK(reg().at(static_cast<PrimId>(k)).id == k);
    CHECK(seen.insert(reg().at(static_cast<PrimId>(k)).name).second);
  }
}

TEST_CASE("candidates returning Bool in an Int/Bool env") {
  TypeEnv env{TypeKind::Int, TypeKind::Bool};
  auto cs = reg().candidates_returning(B(), env);
  auto names = names_of(cs);
  CHECK(names.count("ltInt"));
  CHECK(names.count("not"));
  CHECK(names.count("and"));
  CHECK(has_instance(cs, "eq", I()));
  CHECK_FALSE(names.count("ltFloat"));
  for (const Candidate& c : cs) {
    const Primitive& p = reg().at(c.prim);
    for (const SemType& t : p.params) CHECK(env.admits(substitute(c.subst, t)));
  }
}

TEST_CASE("candidates returning [Int] in an Int/List env") {
  TypeEnv env{TypeKind::Int, TypeKind::List};
  auto cs = reg().candidates_returning(L(I()), env);
  auto names = names_of(cs);
  for (const char* n : {"cons", "tail", "reverse", "replicate", "enumFromThenTo"}) CHECK_MESSAGE(names.count(n), n);
  CHECK(has_instance(cs, "cons", I()));
}

TEST_CASE("candidates are in registry order") {
  auto cs = reg().candidates_returning(I(), TypeEnv::all());
  CHECK(std::is_sorted(cs.begin(), cs.end(), [](const Candidate& a, const Candidate& b) { return a.prim < b.prim; }));
}

TEST_CASE("function types have no direct candidates, only partial applications") {
  SemType ii = Fn(I(), I());
  // No primitive declares a function-typed result; only polymorphic results
  // such as `if` or `head` can be instantiated at one.
  for (const Candidate& c : reg().candidates_returning(ii, TypeEnv::all()))
    CHECK(reg().at(c.prim).ret.is(TypeKind::Var));
  for (const Primitive& p : reg().all()) CHECK_FALSE(p.ret.is(TypeKind::Fun));
  auto partial = names_of(reg().partial_candidates(ii, TypeEnv::all(), TypeEnv::all().base_types()));
  CHECK(partial.count("succInt"));
  CHECK(partial.count("addInt"));
}

TEST_CASE("value-comparing primitives are never instantiated at function types") {
  std::vector<SemType> universe = TypeEnv::all().base_types();
  universe.push_back(Fn(I(), I()));
  for (SemType t : {B(), L(Fn(I(), I())), L(I())}) {
    for (const Candidate& c : reg().candidates_returning(t, TypeEnv::all(), universe)) {
      const Primitive& p = reg().at(c.prim);
      if (p.compares_values) CHECK_FALSE(substitute(c.subst, V("a")).contains_fun());
    }
  }
  Substitution fun_a{{"a", Fn(I(), I())}};
  CHECK_FALSE(reg().find("eq")->admits(fun_a));
  CHECK_FALSE(reg().find("neq")->admits(fun_a));
  CHECK(reg().find("cons")->admits(fun_a));
}

TEST_CASE("return-type variables are fixed by the parameters") {
  for (const Primitive& p : reg().all()) {
    std::vector<std::string> in;
    for (const SemType& t : p.params) free_vars(t, in);
    for (const std::string& v : vars_of(p.ret))
      CHECK_MESSAGE(std::find(in.begin(), in.end(), v) != in.end(), p.name);
  }
}

TEST_CASE("primitive evaluation examples") {
  CHECK(ok("modInt", {iv(7), iv(3)}).as_int() == 1);
  CHECK(call("head", {Value::empty_list()}).status == Status::EmptyStructure);
  ValueList parts{sv("ab"), sv("cd")};
  CHECK(ok("intercalate", {sv(", "), Value::of_list(parts)}).as_utf8() == "ab, cd");
}

TEST_CASE("integer division semantics") {
  CHECK(ok("divInt", {iv(-7), iv(2)}).as_int() == -4);
  CHECK(ok("quotInt", {iv(-7), iv(2)}).as_int() == -3);
  CHECK(ok("modInt", {iv(-7), iv(2)}).as_int() == 1);
  CHECK(ok("remInt", {iv(-7), iv(2)}).as_int() == -1);
  for (const char* n : {"divInt", "quotInt", "modInt", "remInt"}) CHECK(call(n, {iv(1), iv(0)}).status == Status::DivByZero);
  CHECK(call("divFloat", {Value::of_float(1), Value::of_float(0)}).status == Status::DivByZero);
}

TEST_CASE("runtime errors are reported, not wrapped") {
  const auto big = std::numeric_limits<std::int64_t>::max();
  CHECK(call("addInt", {iv(big), iv(1)}).status == Status::Overflow);
  CHECK(call("multInt", {iv(big / 2), iv(3)}).status == Status::Overflow);
  CHECK(call("intToChar", {iv(-1)}).status == Status::ConversionError);
  CHECK(call("intToChar", {iv(0xD800)}).status == Status::ConversionError);
  for (const char* n : {"tail", "init", "last"}) CHECK(call(n, {Value::empty_list()}).status == Status::EmptyStructure);
}

TEST_CASE("list operations follow standard semantics") {
  CHECK(compare(ok("snoc", {iv(4), ilist({1, 2})}), ilist({1, 2, 4})) == 0);
  CHECK(compare(ok("delete", {iv(2), ilist({1, 2, 3, 2})}), ilist({1, 3, 2})) == 0);
  CHECK(compare(ok("enumFromThenTo", {iv(1), iv(3), iv(10)}), ilist({1, 3, 5, 7, 9})) == 0);
  CHECK(compare(ok("enumFromThenTo", {iv(10), iv(8), iv(1)}), ilist({10, 8, 6, 4, 2})) == 0);
  CHECK(compare(ok("enumFromThenTo", {iv(1), iv(0), iv(5)}), ilist({})) == 0);
  CHECK(compare(ok("reverse", {ilist({1, 2, 3})}), ilist({3, 2, 1})) == 0);
  Value split = ok("splitAt", {iv(1), ilist({5, 6, 7})});
  CHECK(compare(split.as_pair().first, ilist({5})) == 0);
  CHECK(compare(split.as_pair().second, ilist({6, 7})) == 0);
  CHECK(compare(ok("replicate", {iv(3), iv(0)}), ilist({0, 0, 0})) == 0);
  CHECK(ok("zip", {ilist({1, 2, 3}), sv("ab")}).as_list().size() == 2);
  CHECK(ok("elem", {iv(3), ilist({1, 3})}).as_bool());
  CHECK(ok("null", {Value::empty_list()}).as_bool());
}

TEST_CASE("maps stay sorted with unique keys") {
  Value m = ok("singleton", {iv(5), sv("five")});
  m = ok("insert", {iv(1), sv("one"), m});
  m = ok("insert", {iv(5), sv("FIVE"), m});
  REQUIRE(m.as_map().size() == 2);
  CHECK(m.as_map()[0].first.as_int() == 1);
  CHECK(m.as_map()[1].second.as_utf8() == "FIVE");
  Value pairs = Value::of_list({Value::of_pair(iv(2), iv(20)), Value::of_pair(iv(1), iv(10)), Value::of_pair(iv(2), iv(21))});
  Value fm = ok("fromList", {pairs});
  REQUIRE(fm.as_map().size() == 2);
  CHECK(fm.as_map()[1].second.as_int() == 21);
}

TEST_CASE("insertWith combines with the pair-taking function") {
  // combine (new, old) with the pair-taking function `fst`
  Value f = Value::of_fun(std::make_shared<const PrimClosure>(prim("fst"), std::vector<Value>{}));
  Value m = ok("singleton", {iv(1), iv(10)});
  m = ok("insertWith", {f, iv(1), iv(99), m});
  CHECK(m.as_map()[0].second.as_int() == 99);
}

TEST_CASE("showFloat renders the shortest round-tripping form") {
  CHECK(show_float(0.1) == "0.1");
  CHECK(show_float(2.0) == "2.0");
  CHECK(std::stod(show_float(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("structure-producing primitives charge for their output") {
  Interpreter in(reg(), kGlobalOps);
  Env env;
  env.bind("xs", ilist({1, 2, 3, 4, 5}));
  Value out;
  REQUIRE(in.eval(ex("reverse xs", {{"xs", L(I())}}), env, out) == Status::Ok);
  CHECK(in.used() == 1 + 5);
  Interpreter in2(reg(), kGlobalOps);
  REQUIRE(in2.eval(ex("length xs", {{"xs", L(I())}}), env, out) == Status::Ok);
  CHECK(in2.used() == 1);
}

TEST_CASE("primitives are pure") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> d(-50, 50);
  for (int n = 0; n < 500; ++n) {
    std::vector<Value> a{iv(d(rng)), iv(d(rng))};
    for (const char* name : {"addInt", "divInt", "modInt", "maxInt", "ltInt"}) {
      PrimResult r1 = call(name, a), r2 = call(name, a);
      CHECK(r1.status == r2.status);
      if (r1.status == Status::Ok) CHECK(equal(r1.value, r2.value));
    }
  }
}
