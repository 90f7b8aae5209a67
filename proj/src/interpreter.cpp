#include "origami/interpreter.hpp"

#include <array>

namespace origami {

Interpreter::Interpreter(const Registry& reg, std::int64_t global_ops, std::int64_t per_iteration_ops)
    : reg_(reg), global_limit_(global_ops), per_iteration_(per_iteration_ops) {}

Status Interpreter::eval(const Expr& e, const Env& env, Value& out) {
  switch (e.kind()) {
    case NodeKind::Var:
      out = env.get(e.var());
      return Status::Ok;
    case NodeKind::Const:
      out = e.constant_value();
      return Status::Ok;
    case NodeKind::App: {
      const auto& args = e.args();
      if (Status s = debit(1); s != Status::Ok) return s;
      if (e.prim() == reg_.if_id()) {
        Value cond;
        if (Status s = eval(args[0], env, cond); s != Status::Ok) return s;
        return eval(cond.as_bool() ? args[1] : args[2], env, out);
      }
      std::array<Value, 4> vals;
      for (std::size_t i = 0; i < args.size(); ++i)
        if (Status s = eval(args[i], env, vals[i]); s != Status::Ok) return s;
      return reg_.at(e.prim()).fn(vals.data(), out, *this);
    }
    case NodeKind::Partial: {
      if (Status s = debit(1); s != Status::Ok) return s;
      std::vector<Value> supplied(e.args().size());
      for (std::size_t i = 0; i < supplied.size(); ++i)
        if (Status s = eval(e.args()[i], env, supplied[i]); s != Status::Ok) return s;
      out = Value::of_fun(std::make_shared<const PrimClosure>(e.prim(), std::move(supplied)));
      return Status::Ok;
    }
  }
  return Status::Ok;
}

Status Interpreter::open_frame(const Expr& e, const Env& env, Value& out) {
  const bool outermost = frame_depth_ == 0;
  if (outermost && per_iteration_ < kUnlimited) frame_limit_ = used_ + per_iteration_;
  ++frame_depth_;
  Status s = eval(e, env, out);
  --frame_depth_;
  if (outermost) frame_limit_ = kUnlimited;
  return s;
}

Status Interpreter::eval_slot(const Expr& e, const Env& env, Value& out) { return open_frame(e, env, out); }

Status Interpreter::apply(const Value& fn, const Value& arg, Value& out) {
  return fn.as_fun().call(arg, out, *this);
}

Status ExprClosure::call(const Value& arg, Value& out, Interpreter& in) const {
  Env env = env_;
  env.bind(param_, arg);
  return in.open_frame(body_, env, out);
}

Status PrimClosure::call(const Value& arg, Value& out, Interpreter& in) const {
  const Primitive& p = in.registry().at(prim_);
  if (Status s = in.debit(1); s != Status::Ok) return s;
  std::array<Value, 4> vals;
  for (std::size_t i = 0; i < supplied_.size(); ++i) vals[i] = supplied_[i];
  vals[supplied_.size()] = arg;
  return p.fn(vals.data(), out, in);
}

EvalOutcome evaluate(const Expr& e, const Scope& scope, Budget& budget, const Registry& reg) {
  Interpreter in(reg, budget.remaining);
  Value v;
  Status s = in.eval(e, scope.env(), v);
  budget.remaining = in.remaining();
  if (s != Status::Ok) return EvalOutcome::failure(s);
  return EvalOutcome::success(std::move(v));
}

EvalOutcome eval_fun_value(const Value& f, const Value& arg, Budget& budget, const Registry& reg) {
  Interpreter in(reg, budget.remaining);
  Value v;
  Status s = in.apply(f, arg, v);
  budget.remaining = in.remaining();
  if (s != Status::Ok) return EvalOutcome::failure(s);
  return EvalOutcome::success(std::move(v));
}

}  // namespace origami
