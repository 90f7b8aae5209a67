#include "origami/schemes.hpp"

#include <algorithm>
#include <cctype>

#include "origami/syntax.hpp"

namespace origami {

int pattern_rank(PatternKind k) { return static_cast<int>(k) + 1; }

std::string_view pattern_name(PatternKind k) {
  switch (k) {
    case PatternKind::NoScheme:
      return "noscheme";
    case PatternKind::Cata:
      return "cata";
    case PatternKind::CurriedCata:
      return "curriedcata";
    case PatternKind::Ana:
      return "ana";
    case PatternKind::Accu:
      return "accu";
    case PatternKind::Hylo:
      return "hylo";
  }
  return "?";
}

std::optional<PatternKind> parse_pattern(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (PatternKind k : kAllPatterns)
    if (pattern_name(k) == lower) return k;
  return std::nullopt;
}

bool needs_unbound(PatternKind k) { return k == PatternKind::Accu || k == PatternKind::Hylo; }

std::string arg_name(std::size_t i) { return "arg" + std::to_string(i); }

bool applicable(PatternKind k, const Signature& sig) {
  const bool list0 = !sig.args.empty() && sig.args[0].is(TypeKind::List);
  switch (k) {
    case PatternKind::NoScheme:
    case PatternKind::Hylo:
      return true;
    case PatternKind::Cata:
    case PatternKind::Accu:
      return list0;
    case PatternKind::CurriedCata:
      return list0 && sig.args.size() == 2;
    case PatternKind::Ana:
      return sig.out.is(TypeKind::List);
  }
  return false;
}

PatternInstance instantiate(PatternKind k, const Signature& sig, std::optional<SemType> unbound) {
  if (!applicable(k, sig))
    throw SchemeError(SchemeError::Code::NotApplicable,
                      std::string(pattern_name(k)) + " does not apply to " + sig.str());
  if (needs_unbound(k) && !unbound)
    throw SchemeError(SchemeError::Code::MissingUnboundType,
                      std::string(pattern_name(k)) + " needs an unbound type");
  if (!needs_unbound(k)) unbound.reset();
  if (unbound && unbound->has_vars())
    throw SchemeError(SchemeError::Code::MissingUnboundType, "unbound type must be concrete");

  PatternInstance inst;
  inst.kind = k;
  inst.sig = sig;
  inst.unbound = unbound;

  ScopeTypes args;
  for (std::size_t i = 0; i < sig.args.size(); ++i) args.push_back({arg_name(i), sig.args[i]});
  auto with_args = [&](ScopeTypes s) {
    s.insert(s.end(), args.begin(), args.end());
    return s;
  };
  const SemType o = sig.out;
  const SemType i0 = sig.args[0];
  const SemType int_t = SemType::int_type();
  auto add = [&](SemType out, ScopeTypes scope) {
    inst.slots.push_back(SlotSpec{static_cast<int>(inst.slots.size()) + 1, out, std::move(scope)});
  };

  switch (k) {
    case PatternKind::NoScheme:
      add(o, args);
      break;
    case PatternKind::Cata: {
      SemType e = i0.elem();
      add(o, {});
      add(o, with_args({{"i", int_t}, {"x", e}, {"acc", o}}));
      break;
    }
    case PatternKind::CurriedCata: {
      SemType e = i0.elem();
      SemType i1 = sig.args[1];
      add(o, {{"ys", i1}});
      add(o, {{"i", int_t}, {"x", e}, {"f", SemType::fun(i1, o)}, {"ys", i1}});
      break;
    }
    case PatternKind::Ana: {
      SemType e = o.elem();
      add(i0, args);
      add(SemType::bool_type(), with_args({{"seed", i0}}));
      add(e, with_args({{"seed", i0}}));
      add(i0, {{"seed", i0}});
      break;
    }
    case PatternKind::Accu: {
      SemType e = i0.elem();
      SemType a = *unbound;
      add(a, args);
      add(a, with_args({{"x", e}, {"xs", i0}, {"s", a}}));
      add(o, with_args({{"s", a}}));
      add(o, with_args({{"x", e}, {"acc", o}, {"s", a}}));
      break;
    }
    case PatternKind::Hylo: {
      SemType a = *unbound;
      add(SemType::bool_type(), with_args({{"seed", i0}}));
      add(a, with_args({{"seed", i0}}));
      add(i0, with_args({{"seed", i0}}));
      add(o, {});
      add(o, with_args({{"x", a}, {"acc", o}}));
      break;
    }
  }
  return inst;
}

namespace {

struct Ids {
  VarId i = var_id("i"), x = var_id("x"), acc = var_id("acc"), f = var_id("f"), ys = var_id("ys"),
        seed = var_id("seed"), s = var_id("s"), xs = var_id("xs");
  std::array<VarId, 8> args;
  Ids() {
    for (std::size_t k = 0; k < args.size(); ++k) args[k] = var_id(arg_name(k));
  }
};

const Ids& ids() {
  static const Ids v;
  return v;
}

bool mentions(const Expr& e, VarId v) {
  if (e.kind() == NodeKind::Var) return e.var() == v;
  for (const Expr& a : e.args())
    if (mentions(a, v)) return true;
  return false;
}

EvalOutcome done(Status s, Value v) {
  if (s != Status::Ok) return EvalOutcome::failure(s);
  return EvalOutcome::success(std::move(v));
}

}  // namespace

EvalOutcome execute(const PatternInstance& inst, const std::vector<Expr>& slots,
                    const std::vector<Value>& inputs, const Limits& limits, const Registry& reg) {
  if (slots.size() != inst.slots.size())
    throw SchemeError(SchemeError::Code::BadProgram, "wrong number of slot expressions");
  if (inputs.size() != inst.sig.args.size())
    throw SchemeError(SchemeError::Code::BadProgram, "wrong number of inputs");
  const Ids& id = ids();
  Interpreter in(reg, limits.global_ops, limits.per_iter_ops);
  Env env;
  for (std::size_t k = 0; k < inputs.size(); ++k) env.bind(id.args[k], inputs[k]);
  Value out;
  Status st = Status::Ok;

  switch (inst.kind) {
    case PatternKind::NoScheme:
      st = in.eval_slot(slots[0], env, out);
      return done(st, std::move(out));

    case PatternKind::Cata: {
      const ValueList& xs = inputs[0].as_list();
      Value acc;
      if ((st = in.eval_slot(slots[0], env, acc)) != Status::Ok) return EvalOutcome::failure(st);
      for (std::size_t k = xs.size(); k-- > 0;) {
        env.bind(id.i, Value::of_int(static_cast<std::int64_t>(k)));
        env.bind(id.x, xs[k]);
        env.bind(id.acc, std::move(acc));
        if ((st = in.eval_slot(slots[1], env, acc)) != Status::Ok) return EvalOutcome::failure(st);
      }
      return EvalOutcome::success(std::move(acc));
    }

    case PatternKind::CurriedCata: {
      // Closures are built bottom-up; only applying the outermost one runs
      // slot code, so the whole fold is a single slot application.
      const ValueList& xs = inputs[0].as_list();
      Value f = Value::of_fun(std::make_shared<const ExprClosure>(slots[0], id.ys, Env()));
      for (std::size_t k = xs.size(); k-- > 0;) {
        Env captured;
        captured.bind(id.i, Value::of_int(static_cast<std::int64_t>(k)));
        captured.bind(id.x, xs[k]);
        captured.bind(id.f, std::move(f));
        f = Value::of_fun(std::make_shared<const ExprClosure>(slots[1], id.ys, std::move(captured)));
      }
      st = in.apply(f, inputs[1], out);
      return done(st, std::move(out));
    }

    case PatternKind::Ana: {
      Value seed;
      if ((st = in.eval_slot(slots[0], env, seed)) != Status::Ok) return EvalOutcome::failure(st);
      ValueList emitted;
      for (std::int64_t n = 0;; ++n) {
        env.bind(id.seed, seed);
        Value stop;
        if ((st = in.eval_slot(slots[1], env, stop)) != Status::Ok) return EvalOutcome::failure(st);
        if (stop.as_bool()) break;
        if (n >= limits.iter_cap) return EvalOutcome::failure(Status::IterationCapExceeded);
        Value elem;
        if ((st = in.eval_slot(slots[2], env, elem)) != Status::Ok) return EvalOutcome::failure(st);
        emitted.push_back(std::move(elem));
        if ((st = in.eval_slot(slots[3], env, seed)) != Status::Ok) return EvalOutcome::failure(st);
      }
      return EvalOutcome::success(Value::of_list(std::move(emitted)));
    }

    case PatternKind::Accu: {
      const ValueList& xs = inputs[0].as_list();
      const bool want_tail = mentions(slots[1], id.xs);
      std::vector<Value> states;
      states.reserve(xs.size() + 1);
      Value s;
      if ((st = in.eval_slot(slots[0], env, s)) != Status::Ok) return EvalOutcome::failure(st);
      states.push_back(s);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        env.bind(id.x, xs[k]);
        if (want_tail)
          env.bind(id.xs, Value::of_list(ValueList(xs.begin() + static_cast<std::ptrdiff_t>(k) + 1, xs.end())));
        env.bind(id.s, states.back());
        if ((st = in.eval_slot(slots[1], env, s)) != Status::Ok) return EvalOutcome::failure(st);
        states.push_back(s);
      }
      Value acc;
      env.bind(id.s, states.back());
      if ((st = in.eval_slot(slots[2], env, acc)) != Status::Ok) return EvalOutcome::failure(st);
      for (std::size_t k = xs.size(); k-- > 0;) {
        env.bind(id.x, xs[k]);
        env.bind(id.acc, std::move(acc));
        env.bind(id.s, states[k]);
        if ((st = in.eval_slot(slots[3], env, acc)) != Status::Ok) return EvalOutcome::failure(st);
      }
      return EvalOutcome::success(std::move(acc));
    }

    case PatternKind::Hylo: {
      Value seed = inputs[0];
      ValueList produced;
      for (std::int64_t n = 0;; ++n) {
        env.bind(id.seed, seed);
        Value stop;
        if ((st = in.eval_slot(slots[0], env, stop)) != Status::Ok) return EvalOutcome::failure(st);
        if (stop.as_bool()) break;
        if (n >= limits.iter_cap) return EvalOutcome::failure(Status::IterationCapExceeded);
        Value elem;
        if ((st = in.eval_slot(slots[1], env, elem)) != Status::Ok) return EvalOutcome::failure(st);
        produced.push_back(std::move(elem));
        if ((st = in.eval_slot(slots[2], env, seed)) != Status::Ok) return EvalOutcome::failure(st);
      }
      Value acc;
      if ((st = in.eval_slot(slots[3], env, acc)) != Status::Ok) return EvalOutcome::failure(st);
      for (std::size_t k = produced.size(); k-- > 0;) {
        env.bind(id.x, std::move(produced[k]));
        env.bind(id.acc, std::move(acc));
        if ((st = in.eval_slot(slots[4], env, acc)) != Status::Ok) return EvalOutcome::failure(st);
      }
      return EvalOutcome::success(std::move(acc));
    }
  }
  return EvalOutcome::failure(Status::Ok);
}

namespace {

// Scaffold text with {k} marking slot k. Each slot sits on a single line.
std::string scaffold(const PatternInstance& inst) {
  std::string head = "f";
  for (std::size_t i = 0; i < inst.sig.args.size(); ++i) head += " " + arg_name(i);
  head += " = ";
  switch (inst.kind) {
    case PatternKind::NoScheme:
      return head + "{1}\n";
    case PatternKind::Cata:
      return head +
             "cata alg arg0 where\n"
             "  alg INil = {1}\n"
             "  alg (ICons i x acc) = {2}\n";
    case PatternKind::CurriedCata:
      return head +
             "cata alg arg0 arg1 where\n"
             "  alg INil = \\ys -> {1}\n"
             "  alg (ICons i x f) = \\ys -> {2}\n";
    case PatternKind::Ana:
      return head +
             "ana coalg {1} where\n"
             "  coalg seed = if {2} then []\n"
             "               else {3} : {4}\n";
    case PatternKind::Accu:
      return head +
             "accu st alg arg0 {1} where\n"
             "  st [] s = []\n"
             "  st (x : xs) s = x : (xs, {2})\n"
             "  alg [] s = {3}\n"
             "  alg (x : acc) s = {4}\n";
    case PatternKind::Hylo:
      return head +
             "hylo alg coalg arg0 where\n"
             "  coalg seed = if {1} then [] else {2} : {3}\n"
             "  alg [] = {4}\n"
             "  alg (x : acc) = {5}\n";
  }
  return head;
}

}  // namespace

std::string render_program(const PatternInstance& inst, const std::vector<Expr>& slots,
                           const Registry& reg) {
  std::string t = scaffold(inst);
  std::string out;
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (t[p] == '{') {
      std::size_t close = t.find('}', p);
      int k = std::stoi(t.substr(p + 1, close - p - 1));
      out += render_expr(slots.at(static_cast<std::size_t>(k - 1)), reg);
      p = close;
    } else {
      out += t[p];
    }
  }
  return out;
}

std::vector<Expr> parse_program(const PatternInstance& inst, std::string_view text, const Registry& reg) {
  const std::string t = scaffold(inst);
  std::vector<Expr> slots(inst.slots.size());
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) {
    throw SchemeError(SchemeError::Code::BadProgram,
                      "program does not match the " + std::string(pattern_name(inst.kind)) +
                          " scaffold: " + why + " near offset " + std::to_string(pos));
  };
  for (std::size_t p = 0; p < t.size(); ++p) {
    char c = t[p];
    if (std::isspace(static_cast<unsigned char>(c))) {
      skip_ws();
      continue;
    }
    if (c == '{') {
      std::size_t close = t.find('}', p);
      auto k = static_cast<std::size_t>(std::stoi(t.substr(p + 1, close - p - 1))) - 1;
      p = close;
      skip_ws();
      std::size_t eol = text.find('\n', pos);
      std::string_view line = text.substr(0, eol == std::string_view::npos ? text.size() : eol);
      try {
        slots[k] = parse_expr_at(line, pos, inst.slots[k].scope, inst.slots[k].out, reg);
      } catch (const ParseError& e) {
        fail("slot " + std::to_string(k + 1) + ": " + e.what());
      }
      continue;
    }
    skip_ws();
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  skip_ws();
  if (pos != text.size()) fail("trailing text");
  return slots;
}

}  // namespace origami
