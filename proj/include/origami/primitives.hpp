#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "origami/expr.hpp"
#include "origami/status.hpp"
#include "origami/types.hpp"
#include "origami/value.hpp"

namespace origami {

class Interpreter;

// Evaluates a fully applied primitive. args has exactly arity() entries and is
// type-correct for some instantiation of the signature.
using PrimFn = Status (*)(const Value* args, Value& out, Interpreter& in);

enum class Cost : std::uint8_t {
  Unit,            // 1
  UnitPlusOutput,  // 1 + length of the produced structure
};

struct Primitive {
  PrimId id = 0;
  std::string name;
  std::vector<SemType> params;
  SemType ret;
  Cost cost = Cost::Unit;
  PrimFn fn = nullptr;

  // eq, elem, Map keys and friends compare values of type `a`, which must
  // therefore never be a function type.
  bool compares_values = false;

  std::size_t arity() const { return params.size(); }
  bool admits(const Substitution& s) const;
  // Whole signature as a curried function type.
  SemType as_type() const;
};

struct Candidate {
  PrimId prim;
  Substitution subst;  // binds every type variable of the primitive
};

class Registry {
 public:
  // The fixed grammar of operations available to every slot.
  static const Registry& standard();

  const Primitive& at(PrimId id) const { return prims_[id]; }
  const Primitive* find(std::string_view name) const;
  const std::vector<Primitive>& all() const { return prims_; }
  std::size_t size() const { return prims_.size(); }

  PrimId if_id() const { return if_id_; }

  // Primitives whose return type unifies with t and whose instantiated
  // signature stays inside env. Type variables not fixed by t are enumerated
  // over `universe` (defaults to env.base_types()). Registry order.
  std::vector<Candidate> candidates_returning(SemType t, const TypeEnv& env) const;
  std::vector<Candidate> candidates_returning(SemType t, const TypeEnv& env,
                                              const std::vector<SemType>& universe) const;

  // Primitives usable as PartialApp of function type fn_type = FunT(a, b):
  // last parameter unifies with a, return with b.
  std::vector<Candidate> partial_candidates(SemType fn_type, const TypeEnv& env,
                                            const std::vector<SemType>& universe) const;

 private:
  Registry();
  void add(std::string name, std::string_view sig, PrimFn fn, Cost cost = Cost::Unit);
  std::vector<Candidate> enumerate(PrimId id, const Substitution& base, const TypeEnv& env,
                                   const std::vector<SemType>& universe) const;

  std::vector<Primitive> prims_;
  std::unordered_map<std::string, PrimId> by_name_;
  PrimId if_id_ = 0;
};

// Evaluates p on args with a fresh interpreter of the default budget.
struct PrimResult {
  Status status;
  Value value;
};
PrimResult eval_primitive(const Primitive& p, std::span<const Value> args);

std::string show_float(double d);

}  // namespace origami
