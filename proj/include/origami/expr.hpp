#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "origami/types.hpp"
#include "origami/value.hpp"

namespace origami {

class Registry;

using VarId = std::uint8_t;
using PrimId = std::uint16_t;

inline constexpr std::size_t kMaxVars = 32;

// Variable names are interned process-wide; there are only a handful
// (arg0.., i, x, acc, f, ys, s, xs, seed).
VarId var_id(std::string_view name);
const std::string& var_name(VarId id);

enum class NodeKind : std::uint8_t { Var, Const, App, Partial };

// Immutable typed expression tree with shared subtrees.
class Expr {
 public:
  Expr() = default;

  static Expr var(std::string_view name, SemType type);
  static Expr constant(Value v, SemType type);
  static Expr app(PrimId prim, std::vector<Expr> args, SemType type);
  // Primitive applied to all but its last parameter; type is FunT(last, ret).
  static Expr partial(PrimId prim, std::vector<Expr> supplied, SemType type);

  bool valid() const { return n_ != nullptr; }
  NodeKind kind() const { return n_->kind; }
  SemType type() const { return n_->type; }
  VarId var() const { return n_->var; }
  const std::string& name() const { return var_name(n_->var); }
  PrimId prim() const { return n_->prim; }
  const Value& constant_value() const { return n_->constant; }
  const std::vector<Expr>& args() const { return n_->args; }

  // Leaf depth is 1.
  int depth() const { return n_->depth; }
  int size() const { return n_->size; }

  bool same_node(const Expr& o) const { return n_ == o.n_; }

 private:
  struct Node {
    NodeKind kind = NodeKind::Const;
    VarId var = 0;
    PrimId prim = 0;
    int depth = 1;
    int size = 1;
    SemType type;
    Value constant;
    std::vector<Expr> args;
  };
  static Expr make(Node node);
  std::shared_ptr<const Node> n_;
};

bool structurally_equal(const Expr& a, const Expr& b);

using Path = std::vector<std::uint8_t>;

struct NodeRef {
  Path path;
  int edges = 0;  // distance from the root
  Expr node;
};

// Preorder listing of every node.
std::vector<NodeRef> collect_nodes(const Expr& root);
Expr subtree_at(const Expr& root, const Path& path);
Expr replace_at(const Expr& root, const Path& path, const Expr& replacement);

struct Binding {
  std::string name;
  SemType type;
};
using ScopeTypes = std::vector<Binding>;

// Runtime environment: values indexed by interned VarId.
class Env {
 public:
  void bind(VarId id, Value v) { vals_[id] = std::move(v); }
  void bind(std::string_view name, Value v) { bind(var_id(name), std::move(v)); }
  const Value& get(VarId id) const { return vals_[id]; }

 private:
  std::array<Value, kMaxVars> vals_;
};

// Runtime scope: the bindings named by a slot plus their current values.
struct Scope {
  struct Entry {
    std::string name;
    SemType type;
    Value value;
  };
  std::vector<Entry> bindings;

  ScopeTypes types() const;
  Env env() const;
};

struct TypecheckResult {
  std::optional<SemType> type;
  std::string error;  // names the offending node when type is empty
  explicit operator bool() const { return type.has_value(); }
};

TypecheckResult typecheck(const Expr& e, const ScopeTypes& scope, const Registry& reg);

}  // namespace origami
