#include <doctest.h>

#include <random>

#include "origami/interpreter.hpp"
#include "support.hpp"

using namespace test;

namespace {

SemType random_type(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 1 ? 5 : 9);
  switch (pick(rng)) {
    case 0: return I();
    case 1: return F();
    case 2: return B();
    case 3: return C();
    case 4: return V("a");
    case 5: return V("b");
    case 6: return L(random_type(rng, depth - 1));
    case 7: return P(random_type(rng, depth - 1), random_type(rng, depth - 1));
    case 8: return SemType::map(random_type(rng, depth - 1), random_type(rng, depth - 1));
    default: return Fn(random_type(rng, depth - 1), random_type(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("unify binds a list element variable") {
  auto s = unify(L(V("a")), L(I()));
  REQUIRE(s);
  CHECK(s->size() == 1);
  CHECK(s->at("a") == I());
}

TEST_CASE("unify fails on constructor clash") {
  CHECK_FALSE(unify(I(), F()));
  CHECK_FALSE(unify(L(I()), P(I(), I())));
}

TEST_CASE("unify binds independent pair components") {
  auto s = unify(P(V("a"), V("b")), P(I(), S()));
  REQUIRE(s);
  CHECK(s->at("a") == I());
  CHECK(s->at("b") == L(C()));
}

TEST_CASE("unify performs the occurs check") {
  CHECK_FALSE(unify(V("a"), L(V("a"))));
}

TEST_CASE("unifier makes both sides identical and unify is symmetric") {
  std::mt19937_64 rng(7);
  int succeeded = 0;
  for (int n = 0; n < 5000; ++n) {
    SemType a = random_type(rng, 3), b = random_type(rng, 3);
    auto ab = unify(a, b);
    auto ba = unify(b, a);
    CHECK(ab.has_value() == ba.has_value());
    if (ab) {
      ++succeeded;
      CHECK(substitute(*ab, a) == substitute(*ab, b));
      CHECK(substitute(*ba, a) == substitute(*ba, b));
    }
  }
  CHECK(succeeded > 100);
}

TEST_CASE("strings are lists of characters") {
  CHECK(S() == L(C()));
  CHECK(S().is_string());
  CHECK(Value::of_string("hi").as_list().size() == 2);
}

TEST_CASE("type rendering parses back") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 2000; ++n) {
    SemType t = random_type(rng, 4);
    CHECK(parse_type(t.str()) == t);
  }
  CHECK(parse_signature("[Int] -> Int -> Char").str() == "[Int] -> Int -> Char");
}

TEST_CASE("typecheck examples") {
  const Registry& reg = Registry::standard();
  auto r = typecheck(Expr::var("acc", I()), {{"acc", I()}}, reg);
  REQUIRE(r);
  CHECK(*r.type == I());

  Expr bad = Expr::app(prim("addInt"), {Expr::constant(iv(1), I()), Expr::constant(bv(true), B())}, I());
  auto rb = typecheck(bad, {}, reg);
  CHECK_FALSE(rb);
  CHECK_FALSE(rb.error.empty());

  Expr len = Expr::app(prim("length"), {Expr::var("arg0", S())}, I());
  auto rl = typecheck(len, {{"arg0", S()}}, reg);
  REQUIRE(rl);
  CHECK(*rl.type == I());
}

TEST_CASE("typecheck rejects unbound variables") {
  CHECK_FALSE(typecheck(Expr::var("y", I()), {{"x", I()}}, Registry::standard()));
}

TEST_CASE("depth and size") {
  Expr zero = Expr::constant(iv(0), I());
  CHECK(zero.depth() == 1);
  CHECK(zero.size() == 1);
  Expr x = Expr::var("x", I());
  Expr one = Expr::constant(iv(1), I());
  Expr add = Expr::app(prim("addInt"), {x, one}, I());
  CHECK(add.depth() == 2);
  CHECK(add.size() == 3);
  Expr mul = Expr::app(prim("multInt"), {x, x}, I());
  Expr nested = Expr::app(prim("addInt"), {mul, one}, I());
  CHECK(nested.depth() == 3);
  CHECK(nested.size() == 5);
}

TEST_CASE("node paths address and replace subtrees") {
  Expr e = ex("addInt (multInt x 2) 1", {{"x", I()}});
  auto nodes = collect_nodes(e);
  REQUIRE(nodes.size() == 5);
  CHECK(nodes[0].edges == 0);
  CHECK(nodes[2].edges == 2);
  Expr swapped = replace_at(e, nodes[1].path, Expr::var("x", I()));
  CHECK(render_expr(swapped) == "addInt x 1");
  CHECK(structurally_equal(subtree_at(e, nodes[1].path), nodes[1].node));
}

TEST_CASE("value order is total on non-function values") {
  CHECK(compare(iv(5), Value::of_float(-1.0)) < 0);
  CHECK(compare(Value::of_float(2.0), bv(false)) < 0);
  CHECK(compare(bv(true), Value::of_char('a')) < 0);
  CHECK(compare(ilist({1, 2}), ilist({1, 2, 0})) < 0);
  CHECK(compare(ilist({2}), ilist({1, 9})) > 0);
  CHECK(equal(Value::of_float(std::nan("")), Value::of_float(std::nan(""))));
  CHECK(compare(Value::of_float(1e308), Value::of_float(std::nan(""))) < 0);
}

TEST_CASE("comparing function values throws") {
  Value f = Value::of_fun(std::make_shared<const PrimClosure>(prim("succInt"), std::vector<Value>{}));
  CHECK_THROWS_AS(compare(f, f), std::logic_error);
}

TEST_CASE("values inhabit their types") {
  CHECK(inhabits(ilist({1, 2}), L(I())));
  CHECK_FALSE(inhabits(ilist({1}), L(C())));
  CHECK(inhabits(Value::of_pair(iv(1), sv("a")), P(I(), S())));
  CHECK(inhabits(Value::empty_list(), L(F())));
}

TEST_CASE("type environments filter constructors") {
  TypeEnv env{TypeKind::Int, TypeKind::Bool};
  CHECK(env.admits(I()));
  CHECK_FALSE(env.admits(L(I())));
  CHECK(env.admits(Fn(I(), B())));
  CHECK(env.base_types() == std::vector<SemType>{I(), B()});
}
