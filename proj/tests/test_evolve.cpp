#include <doctest.h>

#include <cmath>
#include <set>

#include "origami/evolve.hpp"
#include "origami/schemes.hpp"
#include "support.hpp"

using namespace test;

namespace {

const TypeEnv kIntEnv{TypeKind::Int, TypeKind::Bool, TypeKind::List};

SlotSpec spec_of(SemType out, ScopeTypes scope) { return SlotSpec{1, out, std::move(scope)}; }

// NoScheme over Int -> Int, scored against target(x) on x in -5..5.
struct IntTask {
  PatternInstance inst = instantiate(PatternKind::NoScheme, parse_signature("Int -> Int"));
  std::function<std::int64_t(std::int64_t)> target;

  double operator()(const Individual& ind) const {
    double total = 0;
    for (std::int64_t x = -5; x <= 5; ++x) {
      EvalOutcome r = execute(inst, ind.slots, {iv(x)});
      total += r.ok() ? std::fabs(static_cast<double>(r.value.as_int() - target(x))) : 1e6;
    }
    return total;
  }
};

Individual single(std::string_view text, const SlotSpec& s) {
  Individual ind;
  ind.slots.push_back(parse_expr(text, s.scope, s.out));
  return ind;
}

Individual with_fitness(double f, std::string_view text) {
  Individual ind = single(text, spec_of(I(), {{"x", I()}}));
  ind.fitness = f;
  ind.evaluated = true;
  return ind;
}

GpConfig small_cfg(std::uint64_t seed) {
  GpConfig cfg;
  cfg.pop_size = 100;
  cfg.max_evals = 3000;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("depth-1 Bool trees with nothing in scope are constants") {
  SlotGenerator g(spec_of(B(), {}), kIntEnv, ConstantPool{});
  Rng rng(1);
  for (int n = 0; n < 200; ++n) {
    auto e = g.grow(B(), 1, rng);
    REQUIRE(e);
    CHECK(e->kind() == NodeKind::Const);
    CHECK(e->type() == B());
  }
}

TEST_CASE("depth-2 Int trees can apply succInt to a variable") {
  SlotGenerator g(spec_of(I(), {{"acc", I()}}), kIntEnv, ConstantPool{});
  Rng rng(2);
  bool seen = false;
  for (int n = 0; n < 5000 && !seen; ++n) seen = render_expr(*g.grow(I(), 2, rng)) == "succInt acc";
  CHECK(seen);
}

TEST_CASE("full trees reach the requested depth") {
  SlotGenerator g(spec_of(I(), {}), kIntEnv, ConstantPool{});
  Rng rng(3);
  for (int d = 1; d <= 5; ++d)
    for (int n = 0; n < 100; ++n) {
      auto e = g.full(I(), d, rng);
      REQUIRE(e);
      CHECK(e->depth() == d);
    }
}

TEST_CASE("generated trees typecheck and respect the depth bound") {
  ScopeTypes scope{{"x", I()}, {"xs", L(I())}, {"s", S()}, {"f", Fn(I(), B())}};
  const TypeEnv env{TypeKind::Int, TypeKind::Bool, TypeKind::Char, TypeKind::List, TypeKind::Pair};
  Rng rng(4);
  for (SemType t : {I(), B(), L(I()), S(), P(I(), C()), Fn(I(), I())}) {
    SlotGenerator g(spec_of(t, scope), env, ConstantPool{});
    for (int n = 0; n < 500; ++n) {
      const int d = 1 + n % 5;
      auto e = (n % 2) ? g.full(t, d, rng) : g.grow(t, d, rng);
      if (!e) {
        CHECK_FALSE(g.can_make(t, d));
        continue;
      }
      CHECK(e->depth() <= d);
      auto r = typecheck(*e, scope, Registry::standard());
      REQUIRE_MESSAGE(r, render_expr(*e));
      CHECK(*r.type == t);
    }
  }
}

TEST_CASE("apply is only generated with a function binding in scope") {
  Rng rng(5);
  SlotGenerator without(spec_of(I(), {{"x", I()}}), kIntEnv, ConstantPool{});
  for (int n = 0; n < 2000; ++n)
    CHECK(render_expr(*without.full(I(), 4, rng)).find("apply") == std::string::npos);
}

TEST_CASE("ramped half-and-half fills every method and depth cell evenly") {
  auto inst = instantiate(PatternKind::NoScheme, parse_signature("Int -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  Rng rng(6);
  auto pop = init_population(gen, cfg, rng);
  REQUIRE(pop.size() == 1000);
  // Individual j belongs to cell j mod 10: cells 0-4 are full at depths 1-5, 5-9 grow.
  std::map<int, int> per_cell;
  for (std::size_t j = 0; j < pop.size(); ++j) {
    const int cell = static_cast<int>(j % 10);
    const int depth = 1 + cell % 5;
    ++per_cell[cell];
    CHECK(typechecks(pop[j], inst));
    if (cell < 5) CHECK(pop[j].slots[0].depth() == depth);
    else CHECK(pop[j].slots[0].depth() <= depth);
  }
  CHECK(per_cell.size() == 10);
  for (const auto& [cell, n] : per_cell) CHECK(n == 100);
}

TEST_CASE("distinct seeds give distinct populations") {
  auto inst = instantiate(PatternKind::Cata, parse_signature("[Int] -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  cfg.pop_size = 50;
  Rng a(7), b(8);
  auto pa = init_population(gen, cfg, a);
  auto pb = init_population(gen, cfg, b);
  int differ = 0;
  for (std::size_t j = 0; j < pa.size(); ++j)
    if (render_program(inst, pa[j].slots) != render_program(inst, pb[j].slots)) ++differ;
  CHECK(differ > 25);
}

TEST_CASE("tournament of a singleton population") {
  std::vector<Individual> pop{with_fitness(3, "x")};
  Rng rng(9);
  CHECK(&tournament_select(pop, 10, rng) == &pop[0]);
}

TEST_CASE("tournament selection probability matches enumeration") {
  // pop of 3, k = 2 with replacement: the best is picked unless both draws miss it,
  // so p = 1 - (2/3)^2 = 5/9.
  std::vector<Individual> pop{with_fitness(2, "x"), with_fitness(0, "x"), with_fitness(1, "x")};
  Rng rng(10);
  const int trials = 90'000;
  int best = 0;
  for (int n = 0; n < trials; ++n)
    if (&tournament_select(pop, 2, rng) == &pop[1]) ++best;
  const double p = static_cast<double>(best) / trials;
  CHECK(p == doctest::Approx(5.0 / 9.0).epsilon(0.02));
}

TEST_CASE("tournament ties go to the smaller program") {
  std::vector<Individual> pop{with_fitness(1, "addInt x (addInt x x)"), with_fitness(1, "x")};
  Rng rng(11);
  int small = 0;
  for (int n = 0; n < 2000; ++n)
    if (&tournament_select(pop, 10, rng) == &pop[1]) ++small;
  CHECK(small > 1990);  // only loses when all ten draws hit the larger one
}

TEST_CASE("mutating a single-node slot regrows the whole slot") {
  auto inst = instantiate(PatternKind::NoScheme, parse_signature("Int -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  Rng rng(12);
  Individual ind = single("arg0", inst.slots[0]);
  std::set<std::string> seen;
  for (int n = 0; n < 300; ++n) {
    Individual c = mutate(ind, gen, cfg, rng);
    CHECK(c.slots[0].depth() <= 5);
    CHECK(typechecks(c, inst));
    seen.insert(render_expr(c.slots[0]));
  }
  CHECK(seen.size() > 20);
}

TEST_CASE("a node at depth 4 mutates into a terminal") {
  auto inst = instantiate(PatternKind::NoScheme, parse_signature("Int -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  Rng rng(13);
  // depth 5 chain: every mutation point at edge depth 4 is the innermost arg0
  Individual ind = single("succInt (succInt (succInt (succInt arg0)))", inst.slots[0]);
  for (int n = 0; n < 500; ++n) {
    Individual c = mutate(ind, gen, cfg, rng);
    CHECK(c.slots[0].depth() <= 5);
    CHECK(typechecks(c, inst));
    const std::string text = render_expr(c.slots[0]);
    if (text.rfind("succInt (succInt (succInt (succInt ", 0) == 0) {
      // the replaced node was the leaf, so it must still be a terminal
      Expr leaf = c.slots[0].args()[0].args()[0].args()[0].args()[0];
      CHECK(leaf.args().empty());
    }
  }
}

TEST_CASE("mutation keeps types and touches one slot") {
  auto inst = instantiate(PatternKind::Hylo, parse_signature("Int -> Int"), I());
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  cfg.pop_size = 200;
  Rng rng(14);
  auto pop = init_population(gen, cfg, rng);
  for (const Individual& ind : pop) {
    Individual c = mutate(ind, gen, cfg, rng);
    REQUIRE(typechecks(c, inst));
    int changed = 0;
    for (std::size_t k = 0; k < c.slots.size(); ++k) {
      if (!structurally_equal(c.slots[k], ind.slots[k])) ++changed;
      CHECK(c.slots[k].depth() <= 5);
    }
    CHECK(changed <= 1);
  }
}

TEST_CASE("crossover of identical parents stays within the parent") {
  // Whole-slot swaps reproduce the parent exactly; a subtree swap moves one of
  // the parent's own same-typed subtrees into another position.
  auto inst = instantiate(PatternKind::Cata, parse_signature("[Int] -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  cfg.pop_size = 100;
  Rng rng(15);
  int identical = 0;
  for (const Individual& p : init_population(gen, cfg, rng)) {
    Individual c = crossover(p, p, cfg, rng);
    if (render_program(inst, c.slots) == render_program(inst, p.slots)) {
      ++identical;
      continue;
    }
    int changed = 0;
    for (std::size_t k = 0; k < p.slots.size(); ++k) {
      if (structurally_equal(c.slots[k], p.slots[k])) continue;
      ++changed;
      bool explained = false;
      auto nodes = collect_nodes(p.slots[k]);
      for (const NodeRef& a : nodes)
        for (const NodeRef& b : nodes)
          if (!explained && a.node.type() == b.node.type())
            explained = structurally_equal(replace_at(p.slots[k], a.path, b.node), c.slots[k]);
      CHECK(explained);
    }
    CHECK(changed == 1);
  }
  CHECK(identical >= 50);  // at least every whole-slot swap
  SlotSpec s = spec_of(I(), {{"x", I()}});
  Individual leaf = single("x", s);
  for (int n = 0; n < 50; ++n) CHECK(render_expr(crossover(leaf, leaf, cfg, rng).slots[0]) == "x");
}

TEST_CASE("crossover offspring typecheck and respect the depth bound") {
  auto inst = instantiate(PatternKind::Accu, parse_signature("[Int] -> [Int]"), I());
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  cfg.pop_size = 300;
  Rng rng(16);
  auto pop = init_population(gen, cfg, rng);
  for (std::size_t j = 0; j + 1 < pop.size(); ++j) {
    Individual c = crossover(pop[j], pop[j + 1], cfg, rng);
    REQUIRE(typechecks(c, inst));
    for (const Expr& e : c.slots) CHECK(e.depth() <= 5);
  }
}

TEST_CASE("crossover without a compatible subtree swaps the whole slot") {
  SlotSpec s = spec_of(I(), {{"arg0", L(I())}});
  Individual p1 = single("length arg0", s);
  Individual p2 = single("0", s);
  GpConfig cfg;
  Rng rng(17);
  for (int n = 0; n < 200; ++n) CHECK(render_expr(crossover(p1, p2, cfg, rng).slots[0]) == "0");
}

TEST_CASE("refinement removes a dead if branch") {
  SlotSpec s = spec_of(I(), {{"arg0", I()}});
  IntTask task{.target = [](std::int64_t x) { return x + 1; }};
  Individual ind = single("if True (succInt arg0) (multInt arg0 arg0)", s);
  Individual r = refine(ind, task);
  CHECK(render_expr(r.slots[0]) == "succInt arg0");
  CHECK(r.fitness == 0);
}

TEST_CASE("refinement drops an additive zero") {
  SlotSpec s = spec_of(I(), {{"arg0", I()}});
  IntTask task{.target = [](std::int64_t x) { return x; }};
  Individual r = refine(single("addInt arg0 0", s), task);
  CHECK(render_expr(r.slots[0]) == "arg0");
  // when the data needs the addition, nothing changes
  IntTask plus3{.target = [](std::int64_t x) { return x + 3; }};
  CHECK(render_expr(refine(single("addInt arg0 3", s), plus3).slots[0]) == "addInt arg0 3");
}

TEST_CASE("refining a single node is the identity") {
  SlotSpec s = spec_of(I(), {{"arg0", I()}});
  IntTask task{.target = [](std::int64_t x) { return 2 * x; }};
  CHECK(render_expr(refine(single("arg0", s), task).slots[0]) == "arg0");
}

TEST_CASE("refinement never worsens fitness, size or types") {
  auto inst = instantiate(PatternKind::NoScheme, parse_signature("Int -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  GpConfig cfg;
  cfg.pop_size = 300;
  Rng rng(18);
  IntTask task{.target = [](std::int64_t x) { return x * x - 1; }};
  for (Individual ind : init_population(gen, cfg, rng)) {
    ind.fitness = task(ind);
    ind.evaluated = true;
    Individual r = refine(ind, task);
    CHECK(r.fitness <= ind.fitness);
    CHECK(r.fitness == task(r));
    CHECK(r.total_size() <= ind.total_size());
    CHECK(typechecks(r, inst));
  }
}

TEST_CASE("a constant target stops in the first generation") {
  auto inst = instantiate(PatternKind::NoScheme, parse_signature("Int -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  IntTask task{.target = [](std::int64_t) { return 0; }};
  GpConfig cfg;
  cfg.seed = 19;
  RunResult r = run(gen, task, cfg);
  CHECK(r.stopped_early);
  CHECK(r.generations == 1);
  CHECK(r.champion.fitness == 0);
  CHECK(r.evals_used == cfg.pop_size);
}

TEST_CASE("evaluation accounting and monotone best fitness") {
  auto inst = instantiate(PatternKind::NoScheme, parse_signature("Int -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  IntTask task{.target = [](std::int64_t x) { return x * x * x - 7 * x + 13; }};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GpConfig cfg = small_cfg(seed);
    cfg.max_evals = 2050;
    double last = std::numeric_limits<double>::infinity();
    bool monotone = true;
    RunResult r = run(gen, task, cfg, [&](const GenerationStats& s) {
      monotone = monotone && s.best <= last;
      last = s.best;
    });
    CHECK(monotone);
    CHECK(r.evals_used <= cfg.max_evals);
    CHECK(r.evals_used == static_cast<std::int64_t>(r.generations) * cfg.pop_size);
    if (!r.stopped_early) CHECK(r.evals_used >= cfg.max_evals - cfg.pop_size);
    CHECK(r.champion.fitness <= r.unrefined_fitness);
  }
}

TEST_CASE("runs are reproducible") {
  auto inst = instantiate(PatternKind::Cata, parse_signature("[Int] -> Int"));
  Generator gen(inst, kIntEnv, ConstantPool{});
  auto task = [&](const Individual& ind) {
    double total = 0;
    for (int n = 0; n < 6; ++n) {
      std::vector<std::int64_t> xs;
      for (int j = 0; j < n; ++j) xs.push_back(j * 3 - 4);
      EvalOutcome r = execute(inst, ind.slots, {ilist(xs)});
      std::int64_t want = 0;
      for (auto x : xs) want += x * x;
      total += r.ok() ? std::fabs(static_cast<double>(r.value.as_int() - want)) : 1e6;
    }
    return total;
  };
  GpConfig cfg = small_cfg(20);
  RunResult a = run(gen, task, cfg);
  RunResult b = run(gen, task, cfg);
  CHECK(render_program(inst, a.champion.slots) == render_program(inst, b.champion.slots));
  CHECK(a.evals_used == b.evals_used);
  CHECK(a.generations == b.generations);
  CHECK(a.champion.fitness == b.champion.fitness);
}

TEST_CASE("every individual typechecks in checked mode") {
  auto inst = instantiate(PatternKind::Hylo, parse_signature("Int -> Int"), I());
  Generator gen(inst, kIntEnv, ConstantPool{});
  auto task = [&](const Individual& ind) {
    EvalOutcome r = execute(inst, ind.slots, {iv(4)});
    return r.ok() ? std::fabs(static_cast<double>(r.value.as_int() - 30)) : 1e6;
  };
  GpConfig cfg = small_cfg(21);
  cfg.check_types = true;
  RunResult r = run(gen, task, cfg);
  CHECK(r.typechecks > 0);
  CHECK(r.type_failures == 0);
}

TEST_CASE("configuration validation") {
  GpConfig ok;
  CHECK_NOTHROW(ok.validate());
  GpConfig bad = ok;
  bad.crossover_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.pop_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.ramp_min = 4;
  bad.ramp_max = 2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
