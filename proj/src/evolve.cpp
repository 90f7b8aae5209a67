#include "origami/evolve.hpp"

#include <algorithm>
#include <set>

namespace origami {

void GpConfig::validate() const {
  if (pop_size < 1) throw std::invalid_argument("pop size must be positive");
  if (tournament_k < 1) throw std::invalid_argument("tournament size must be positive");
  if (!(crossover_rate >= 0 && crossover_rate <= 1)) throw std::invalid_argument("crossover rate must be in [0, 1]");
  if (max_depth < 1) throw std::invalid_argument("max depth must be positive");
  if (ramp_min < 1 || ramp_max < ramp_min || ramp_max > max_depth)
    throw std::invalid_argument("ramp depths must satisfy 1 <= min <= max <= max depth");
  if (max_evals < 1) throw std::invalid_argument("max evaluations must be positive");
}

int Individual::total_size() const {
  int n = 0;
  for (const Expr& e : slots) n += e.size();
  return n;
}

namespace {

std::size_t pick(std::size_t n, Rng& rng) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

void subterms(SemType t, std::set<SemType>& out) {
  if (t.has_vars() || t.contains_fun()) {
    switch (t.kind()) {
      case TypeKind::List:
        subterms(t.elem(), out);
        break;
      case TypeKind::Pair:
      case TypeKind::Map:
      case TypeKind::Fun:
        subterms(t.first(), out);
        subterms(t.second(), out);
        break;
      default:
        break;
    }
    return;
  }
  out.insert(t);
  switch (t.kind()) {
    case TypeKind::List:
      subterms(t.elem(), out);
      break;
    case TypeKind::Pair:
    case TypeKind::Map:
      subterms(t.first(), out);
      subterms(t.second(), out);
      break;
    default:
      break;
  }
}

void allow_all(SemType t, TypeEnv& env) {
  env.allow(t.kind());
  switch (t.kind()) {
    case TypeKind::List:
      allow_all(t.elem(), env);
      break;
    case TypeKind::Pair:
    case TypeKind::Map:
    case TypeKind::Fun:
      allow_all(t.first(), env);
      allow_all(t.second(), env);
      break;
    default:
      break;
  }
}

}  // namespace

SlotGenerator::SlotGenerator(const SlotSpec& spec, const TypeEnv& env, const ConstantPool& pool,
                             const Registry& reg)
    : spec_(spec), env_(env), pool_(pool), reg_(reg) {
  // The scaffold dictates the slot type, so its constructors are always usable.
  allow_all(spec_.out, env_);
  std::set<SemType> u;
  for (SemType t : env_.base_types()) u.insert(t);
  for (const Binding& b : spec_.scope) subterms(b.type, u);
  subterms(spec_.out, u);
  universe_.assign(u.begin(), u.end());
  for (const Binding& b : spec_.scope) fun_in_scope_ = fun_in_scope_ || b.type.contains_fun();
}

const std::vector<SlotGenerator::Option>& SlotGenerator::options(SemType t) {
  auto it = options_.find(t);
  if (it != options_.end()) return it->second;
  std::vector<Option> out;
  for (const Candidate& c : reg_.candidates_returning(t, env_, universe_)) {
    const Primitive& p = reg_.at(c.prim);
    if (p.name == "apply" && !fun_in_scope_) continue;
    Option o{c.prim, false, {}, t};
    for (const SemType& pt : p.params) o.arg_types.push_back(substitute(c.subst, pt));
    out.push_back(std::move(o));
  }
  if (t.is(TypeKind::Fun)) {
    for (const Candidate& c : reg_.partial_candidates(t, env_, universe_)) {
      const Primitive& p = reg_.at(c.prim);
      Option o{c.prim, true, {}, t};
      for (std::size_t i = 0; i + 1 < p.arity(); ++i) o.arg_types.push_back(substitute(c.subst, p.params[i]));
      out.push_back(std::move(o));
    }
  }
  return options_.emplace(t, std::move(out)).first->second;
}

bool SlotGenerator::has_constant(SemType t) const {
  if (!env_.admits(t)) return false;
  switch (t.kind()) {
    case TypeKind::Int:
      return !pool_.ints.empty();
    case TypeKind::Float:
      return !pool_.floats.empty();
    case TypeKind::Char:
      return !pool_.chars.empty();
    case TypeKind::Bool:
    case TypeKind::List:
    case TypeKind::Map:
      return true;
    case TypeKind::Pair:
      return has_constant(t.first()) && has_constant(t.second());
    case TypeKind::Fun:
    case TypeKind::Var:
      return false;
  }
  return false;
}

Value SlotGenerator::random_constant(SemType t, Rng& rng) const {
  switch (t.kind()) {
    case TypeKind::Int:
      return Value::of_int(pool_.ints[pick(pool_.ints.size(), rng)]);
    case TypeKind::Float:
      return Value::of_float(pool_.floats[pick(pool_.floats.size(), rng)]);
    case TypeKind::Char:
      return Value::of_char(pool_.chars[pick(pool_.chars.size(), rng)]);
    case TypeKind::Bool:
      return Value::of_bool(pick(2, rng) == 1);
    case TypeKind::List: {
      if (t.is_string() && !pool_.strings.empty()) {
        std::size_t k = pick(pool_.strings.size() + 1, rng);
        if (k > 0) return Value::of_string(std::u32string_view(pool_.strings[k - 1]));
      }
      return Value::empty_list();
    }
    case TypeKind::Pair: {
      Value a = random_constant(t.first(), rng);
      Value b = random_constant(t.second(), rng);
      return Value::of_pair(std::move(a), std::move(b));
    }
    case TypeKind::Map:
      return Value::of_map({});
    default:
      break;
  }
  throw UnsatisfiableType("no constants of type " + t.str());
}

bool SlotGenerator::has_terminal(SemType t) {
  for (const Binding& b : spec_.scope)
    if (b.type == t) return true;
  if (has_constant(t)) return true;
  if (t.is(TypeKind::Fun))
    for (const Option& o : options(t))
      if (o.partial && o.arg_types.empty()) return true;
  return false;
}

bool SlotGenerator::can_make(SemType t, int depth) {
  if (depth < 1) return false;
  auto key = std::make_pair(t, depth);
  auto it = can_make_.find(key);
  if (it != can_make_.end()) return it->second;
  can_make_[key] = false;  // guards against re-entry on the same key
  bool ok = has_terminal(t) || !viable(t, depth).empty();
  can_make_[key] = ok;
  return ok;
}

std::vector<const SlotGenerator::Option*> SlotGenerator::viable(SemType t, int depth) {
  std::vector<const Option*> out;
  if (depth < 2) return out;
  const auto& opts = options(t);
  for (const Option& o : opts) {
    if (o.arg_types.empty()) continue;
    bool ok = true;
    for (SemType a : o.arg_types)
      if (!can_make(a, depth - 1)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(&o);
  }
  return out;
}

std::optional<Expr> SlotGenerator::terminal(SemType t, Rng& rng) {
  std::vector<const Binding*> vars;
  for (const Binding& b : spec_.scope)
    if (b.type == t) vars.push_back(&b);
  std::vector<const Option*> refs;
  if (t.is(TypeKind::Fun))
    for (const Option& o : options(t))
      if (o.partial && o.arg_types.empty()) refs.push_back(&o);
  const bool konst = has_constant(t) || !refs.empty();
  if (vars.empty() && !konst) return std::nullopt;
  if (!vars.empty() && (!konst || unit(rng) < kVariableProb)) {
    const Binding* b = vars[pick(vars.size(), rng)];
    return Expr::var(b->name, b->type);
  }
  if (!refs.empty()) {
    const Option* o = refs[pick(refs.size(), rng)];
    return Expr::partial(o->prim, {}, t);
  }
  return Expr::constant(random_constant(t, rng), t);
}

std::optional<Expr> SlotGenerator::generate(SemType t, int max_depth, Method m, Rng& rng) {
  if (!can_make(t, max_depth)) return std::nullopt;
  std::vector<const Option*> nonterm = viable(t, max_depth);
  const bool term_ok = has_terminal(t);
  bool use_terminal = nonterm.empty() || (term_ok && m == Method::Grow && unit(rng) < kTerminalProb);
  if (use_terminal) return terminal(t, rng);

  // Primitive first, then one of its instantiations.
  std::vector<PrimId> prims;
  for (const Option* o : nonterm)
    if (prims.empty() || prims.back() != o->prim) prims.push_back(o->prim);
  PrimId chosen = prims[pick(prims.size(), rng)];
  std::vector<const Option*> inst;
  for (const Option* o : nonterm)
    if (o->prim == chosen) inst.push_back(o);
  const Option* o = inst[pick(inst.size(), rng)];

  std::vector<Expr> args;
  args.reserve(o->arg_types.size());
  for (SemType a : o->arg_types) {
    auto sub = generate(a, max_depth - 1, m, rng);
    if (!sub) return std::nullopt;
    args.push_back(std::move(*sub));
  }
  return o->partial ? Expr::partial(o->prim, std::move(args), t) : Expr::app(o->prim, std::move(args), t);
}

Generator::Generator(const PatternInstance& inst, const TypeEnv& env, const ConstantPool& pool,
                     const Registry& reg)
    : inst_(inst) {
  for (const SlotSpec& s : inst_.slots) slots_.emplace_back(s, env, pool, reg);
}

namespace {

Expr make_slot(SlotGenerator& g, int depth, SlotGenerator::Method m, Rng& rng) {
  SemType t = g.spec().out;
  for (int d = depth; d <= std::max(depth, 5) + 5; ++d) {
    auto e = g.generate(t, d, m, rng);
    if (e) return *e;
  }
  throw UnsatisfiableType("cannot build slot " + std::to_string(g.spec().index) + " of type " + t.str());
}

}  // namespace

std::vector<Individual> init_population(Generator& gen, const GpConfig& cfg, Rng& rng) {
  std::vector<Individual> pop;
  pop.reserve(static_cast<std::size_t>(cfg.pop_size));
  const int depths = cfg.ramp_max - cfg.ramp_min + 1;
  for (int j = 0; j < cfg.pop_size; ++j) {
    const int cell = j % (2 * depths);
    const auto method = cell < depths ? SlotGenerator::Method::Full : SlotGenerator::Method::Grow;
    const int depth = cfg.ramp_min + cell % depths;
    Individual ind;
    for (std::size_t k = 0; k < gen.size(); ++k) ind.slots.push_back(make_slot(gen.slot(k), depth, method, rng));
    pop.push_back(std::move(ind));
  }
  return pop;
}

const Individual& tournament_select(const std::vector<Individual>& pop, int k, Rng& rng) {
  const Individual* best = &pop[pick(pop.size(), rng)];
  for (int s = 1; s < k; ++s) {
    const Individual* c = &pop[pick(pop.size(), rng)];
    if (c->fitness < best->fitness || (c->fitness == best->fitness && c->total_size() < best->total_size()))
      best = c;
  }
  return *best;
}

Individual mutate(const Individual& ind, Generator& gen, const GpConfig& cfg, Rng& rng) {
  Individual child;
  child.slots = ind.slots;
  const std::size_t k = pick(child.slots.size(), rng);
  SlotGenerator& g = gen.slot(k);
  auto nodes = collect_nodes(child.slots[k]);
  const NodeRef& n = nodes[pick(nodes.size(), rng)];
  const int allowance = cfg.max_depth - n.edges;
  std::optional<Expr> repl =
      allowance >= 1 ? g.grow(n.node.type(), allowance, rng) : g.terminal(n.node.type(), rng);
  if (!repl) repl = g.terminal(n.node.type(), rng);
  if (repl) child.slots[k] = replace_at(child.slots[k], n.path, *repl);
  return child;
}

Individual crossover(const Individual& p1, const Individual& p2, const GpConfig& cfg, Rng& rng) {
  Individual child;
  child.slots = p1.slots;
  const std::size_t k = pick(child.slots.size(), rng);
  if (unit(rng) < 0.5) {
    child.slots[k] = p2.slots[k];
    return child;
  }
  auto mine = collect_nodes(p1.slots[k]);
  auto theirs = collect_nodes(p2.slots[k]);
  for (int attempt = 0; attempt < 20; ++attempt) {
    const NodeRef& a = mine[pick(mine.size(), rng)];
    std::vector<const NodeRef*> compatible;
    for (const NodeRef& b : theirs)
      if (b.node.type() == a.node.type() && a.edges + b.node.depth() <= cfg.max_depth) compatible.push_back(&b);
    if (compatible.empty()) continue;
    const NodeRef* b = compatible[pick(compatible.size(), rng)];
    child.slots[k] = replace_at(p1.slots[k], a.path, b->node);
    return child;
  }
  child.slots[k] = p2.slots[k];
  return child;
}

namespace {

void refine_at(Individual& ind, std::size_t k, const Path& path, const FitnessFn& fitness) {
  while (true) {
    Expr node = subtree_at(ind.slots[k], path);
    std::optional<Individual> best;
    for (const Expr& c : node.args()) {
      if (c.type() != node.type()) continue;
      Individual trial;
      trial.slots = ind.slots;
      trial.slots[k] = replace_at(ind.slots[k], path, c);
      trial.fitness = fitness(trial);
      trial.evaluated = true;
      if (trial.fitness <= ind.fitness && (!best || trial.fitness < best->fitness)) best = std::move(trial);
    }
    if (!best) break;
    ind = std::move(*best);
  }
  Expr node = subtree_at(ind.slots[k], path);
  for (std::size_t i = 0; i < node.args().size(); ++i) {
    Path child = path;
    child.push_back(static_cast<std::uint8_t>(i));
    refine_at(ind, k, child, fitness);
  }
}

}  // namespace

Individual refine(const Individual& champion, const FitnessFn& fitness) {
  Individual ind = champion;
  if (!ind.evaluated) {
    ind.fitness = fitness(ind);
    ind.evaluated = true;
  }
  for (std::size_t k = 0; k < ind.slots.size(); ++k) refine_at(ind, k, {}, fitness);
  return ind;
}

bool typechecks(const Individual& ind, const PatternInstance& inst, const Registry& reg) {
  if (ind.slots.size() != inst.slots.size()) return false;
  for (std::size_t k = 0; k < ind.slots.size(); ++k) {
    auto r = typecheck(ind.slots[k], inst.slots[k].scope, reg);
    if (!r || *r.type != inst.slots[k].out) return false;
  }
  return true;
}

RunResult run(Generator& gen, const FitnessFn& fitness, const GpConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  Rng rng(cfg.seed);
  RunResult res;
  auto audit = [&](const Individual& ind) {
    if (!cfg.check_types) return;
    ++res.typechecks;
    if (!typechecks(ind, gen.instance())) ++res.type_failures;
  };

  std::vector<Individual> pop = init_population(gen, cfg, rng);
  if (static_cast<std::int64_t>(pop.size()) > cfg.max_evals) pop.resize(static_cast<std::size_t>(cfg.max_evals));
  std::optional<Individual> best;

  while (true) {
    double sum = 0;
    for (Individual& ind : pop) {
      audit(ind);
      ind.fitness = fitness(ind);
      ind.evaluated = true;
      ++res.evals_used;
      sum += ind.fitness;
      if (!best || ind.fitness < best->fitness ||
          (ind.fitness == best->fitness && ind.total_size() < best->total_size()))
        best = ind;
    }
    ++res.generations;
    if (progress)
      progress(GenerationStats{res.generations, best->fitness, sum / static_cast<double>(pop.size()), res.evals_used});
    if (best->fitness == 0) {
      res.stopped_early = true;
      break;
    }
    if (res.evals_used + static_cast<std::int64_t>(pop.size()) > cfg.max_evals) break;

    std::vector<Individual> next;
    next.reserve(pop.size());
    for (std::size_t j = 0; j < pop.size(); ++j) {
      if (unit(rng) < cfg.crossover_rate) {
        const Individual& a = tournament_select(pop, cfg.tournament_k, rng);
        const Individual& b = tournament_select(pop, cfg.tournament_k, rng);
        next.push_back(crossover(a, b, cfg, rng));
      } else {
        next.push_back(mutate(tournament_select(pop, cfg.tournament_k, rng), gen, cfg, rng));
      }
    }
    pop = std::move(next);
  }

  res.unrefined = *best;
  res.unrefined_fitness = best->fitness;
  res.champion = refine(*best, [&](const Individual& trial) {
    audit(trial);
    return fitness(trial);
  });
  audit(res.champion);
  return res;
}

}  // namespace origami
