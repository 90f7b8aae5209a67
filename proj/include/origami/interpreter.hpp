#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "origami/expr.hpp"
#include "origami/primitives.hpp"
#include "origami/status.hpp"
#include "origami/value.hpp"

namespace origami {

struct Budget {
  std::int64_t remaining = 0;
};

struct EvalOutcome {
  Status status = Status::Ok;
  Value value;

  bool ok() const { return status == Status::Ok; }
  static EvalOutcome success(Value v) { return {Status::Ok, std::move(v)}; }
  static EvalOutcome failure(Status s) { return {s, Value()}; }
};

// Default operation limits.
inline constexpr std::int64_t kIterationCap = 10'000;
inline constexpr std::int64_t kPerIterationOps = 10'000;
inline constexpr std::int64_t kGlobalOps = 100'000;
inline constexpr std::int64_t kUnlimited = std::numeric_limits<std::int64_t>::max() / 4;

class Closure {
 public:
  virtual ~Closure() = default;
  virtual Status call(const Value& arg, Value& out, Interpreter& in) const = 0;
};

// A slot body awaiting one parameter, evaluated in a captured environment.
class ExprClosure final : public Closure {
 public:
  ExprClosure(Expr body, VarId param, Env captured)
      : body_(std::move(body)), param_(param), env_(std::move(captured)) {}
  Status call(const Value& arg, Value& out, Interpreter& in) const override;

 private:
  Expr body_;
  VarId param_;
  Env env_;
};

// A primitive missing its final argument (arity-1 supplied values).
class PrimClosure final : public Closure {
 public:
  PrimClosure(PrimId prim, std::vector<Value> supplied)
      : prim_(prim), supplied_(std::move(supplied)) {}
  Status call(const Value& arg, Value& out, Interpreter& in) const override;

 private:
  PrimId prim_;
  std::vector<Value> supplied_;
};

// Strict, left-to-right evaluator with a weighted operation counter.
//
// Two limits apply: the global budget for the whole evaluation, and an
// optional per-iteration budget that bounds the operations spent inside any
// single outermost slot application (nested closure calls count toward the
// enclosing application).
class Interpreter {
 public:
  Interpreter(const Registry& reg, std::int64_t global_ops,
              std::int64_t per_iteration_ops = kUnlimited);

  Status eval(const Expr& e, const Env& env, Value& out);
  // Evaluates e as one slot application (opens an iteration frame).
  Status eval_slot(const Expr& e, const Env& env, Value& out);
  // Applies a function value; every closure call is a slot application.
  Status apply(const Value& fn, const Value& arg, Value& out);

  Status debit(std::int64_t cost) {
    used_ += cost;
    if (used_ > global_limit_) {
      used_ = global_limit_;
      return Status::BudgetExhausted;
    }
    if (used_ > frame_limit_) return Status::PerIterationBudget;
    return Status::Ok;
  }

  std::int64_t used() const { return used_; }
  std::int64_t remaining() const { return global_limit_ - used_; }
  const Registry& registry() const { return reg_; }

 private:
  friend class ExprClosure;
  Status open_frame(const Expr& e, const Env& env, Value& out);

  const Registry& reg_;
  std::int64_t used_ = 0;
  std::int64_t global_limit_;
  std::int64_t per_iteration_;
  std::int64_t frame_limit_ = kUnlimited;
  int frame_depth_ = 0;
};

// Evaluates e in scope, debiting budget (written back on return).
EvalOutcome evaluate(const Expr& e, const Scope& scope, Budget& budget,
                     const Registry& reg = Registry::standard());

// Applies a function value to one argument.
EvalOutcome eval_fun_value(const Value& f, const Value& arg, Budget& budget,
                           const Registry& reg = Registry::standard());

}  // namespace origami
