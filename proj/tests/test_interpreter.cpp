#include <doctest.h>

#include <random>

#include "origami/evolve.hpp"
#include "origami/interpreter.hpp"
#include "support.hpp"

using namespace test;

namespace {

EvalOutcome run(std::string_view text, std::int64_t ops, Budget* out_budget = nullptr, Scope scope = {}) {
  Budget b{ops};
  EvalOutcome r = evaluate(ex(text, scope.types()), scope, b);
  if (out_budget) *out_budget = b;
  return r;
}

Value closure_of(std::string_view prim_name, std::vector<Value> supplied = {}) {
  return Value::of_fun(std::make_shared<const PrimClosure>(prim(prim_name), std::move(supplied)));
}

}  // namespace

TEST_CASE("evaluation debits one unit per application") {
  Budget b;
  EvalOutcome r = run("addInt 2 3", 100, &b);
  REQUIRE(r.ok());
  CHECK(r.value.as_int() == 5);
  CHECK(b.remaining == 99);
}

TEST_CASE("runtime failures propagate") {
  EvalOutcome r = run("head ([] :: [Int])", 100);
  CHECK(r.status == Status::EmptyStructure);
}

TEST_CASE("budget exhaustion aborts evaluation") {
  // 101 nested applications of succInt
  std::string text = "0";
  for (int k = 0; k < 101; ++k) text = "succInt (" + text + ")";
  CHECK(run(text, 100).status == Status::BudgetExhausted);
  CHECK(run(text, 101).ok());
}

TEST_CASE("if evaluates only the taken branch") {
  EvalOutcome r = run("if True 1 (head ([] :: [Int]))", 100);
  REQUIRE(r.ok());
  CHECK(r.value.as_int() == 1);
  CHECK(run("if False 1 (head ([] :: [Int]))", 100).status == Status::EmptyStructure);
}

TEST_CASE("and/or evaluate both operands") {
  CHECK(run("and False (eq (divInt 1 0) 0)", 100).status == Status::DivByZero);
  CHECK(run("or True (eq (divInt 1 0) 0)", 100).status == Status::DivByZero);
}

TEST_CASE("applying function values") {
  Budget b{100};
  Interpreter in(Registry::standard(), 100);
  Value id = Value::of_fun(std::make_shared<const ExprClosure>(Expr::var("ys", I()), var_id("ys"), Env()));
  EvalOutcome r = eval_fun_value(id, iv(7), b);
  REQUIRE(r.ok());
  CHECK(r.value.as_int() == 7);

  EvalOutcome r2 = eval_fun_value(closure_of("addInt", {iv(10)}), iv(5), b);
  REQUIRE(r2.ok());
  CHECK(r2.value.as_int() == 15);
}

TEST_CASE("applying a closure whose body exhausts the budget") {
  std::string text = "ys";
  for (int k = 0; k < 50; ++k) text = "succInt (" + text + ")";
  Value f = Value::of_fun(std::make_shared<const ExprClosure>(ex(text, {{"ys", I()}}), var_id("ys"), Env()));
  Budget b{20};
  CHECK(eval_fun_value(f, iv(0), b).status == Status::BudgetExhausted);
}

TEST_CASE("the apply primitive calls function-typed bindings") {
  Scope s;
  s.bindings.push_back({"f", Fn(I(), I()), closure_of("multInt", {iv(3)})});
  EvalOutcome r = run("apply f (apply f 2)", 100, nullptr, s);
  REQUIRE(r.ok());
  CHECK(r.value.as_int() == 18);
}

TEST_CASE("per-iteration limit applies to the outermost slot application") {
  Interpreter in(Registry::standard(), kUnlimited, 10);
  Env env;
  Value out;
  std::string text = "0";
  for (int k = 0; k < 11; ++k) text = "succInt (" + text + ")";
  CHECK(in.eval_slot(ex(text), env, out) == Status::PerIterationBudget);
  Interpreter in2(Registry::standard(), kUnlimited, 10);
  std::string ten = "0";
  for (int k = 0; k < 10; ++k) ten = "succInt (" + ten + ")";
  CHECK(in2.eval_slot(ex(ten), env, out) == Status::Ok);
  CHECK(in2.eval_slot(ex(ten), env, out) == Status::Ok);  // each application gets its own allowance
}

TEST_CASE("budget is monotone and evaluation deterministic") {
  std::mt19937_64 rng(5);
  SlotSpec spec{1, I(), {{"x", I()}, {"xs", L(I())}}};
  SlotGenerator gen(spec, TypeEnv{TypeKind::Int, TypeKind::Bool, TypeKind::List}, ConstantPool{});
  std::uniform_int_distribution<int> d(-20, 20);
  for (int n = 0; n < 2000; ++n) {
    auto e = gen.grow(I(), 5, rng);
    REQUIRE(e);
    Scope s;
    s.bindings.push_back({"x", I(), iv(d(rng))});
    s.bindings.push_back({"xs", L(I()), ilist({d(rng), d(rng), d(rng)})});
    Budget b1{1000}, b2{1000};
    EvalOutcome r1 = evaluate(*e, s, b1);
    EvalOutcome r2 = evaluate(*e, s, b2);
    CHECK(b1.remaining <= 1000);
    CHECK(b1.remaining >= 0);
    CHECK(b1.remaining == b2.remaining);
    CHECK(r1.status == r2.status);
    if (r1.ok()) {
      CHECK(equal(r1.value, r2.value));
      CHECK(inhabits(r1.value, I()));
    }
  }
}
