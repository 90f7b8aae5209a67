#include "origami/expr.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "origami/primitives.hpp"
#include "origami/syntax.hpp"

namespace origami {

namespace {

struct VarTable {
  std::mutex mu;
  std::vector<std::string> names;
  std::unordered_map<std::string, VarId> ids;
};

VarTable& var_table() {
  static VarTable* t = [] {
    auto* v = new VarTable();
    v->names.reserve(kMaxVars);  // references handed out by var_name stay valid
    return v;
  }();
  return *t;
}

}  // namespace

VarId var_id(std::string_view name) {
  VarTable& t = var_table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  if (t.names.size() >= kMaxVars) throw std::length_error("too many distinct variable names");
  auto id = static_cast<VarId>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string& var_name(VarId id) {
  VarTable& t = var_table();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names.at(id);
}

Expr Expr::make(Node node) {
  int depth = 0;
  int size = 1;
  for (const Expr& a : node.args) {
    depth = std::max(depth, a.depth());
    size += a.size();
  }
  node.depth = depth + 1;
  node.size = size;
  Expr e;
  e.n_ = std::make_shared<const Node>(std::move(node));
  return e;
}

Expr Expr::var(std::string_view name, SemType type) {
  Node n;
  n.kind = NodeKind::Var;
  n.var = var_id(name);
  n.type = type;
  return make(std::move(n));
}

Expr Expr::constant(Value v, SemType type) {
  Node n;
  n.kind = NodeKind::Const;
  n.constant = std::move(v);
  n.type = type;
  return make(std::move(n));
}

Expr Expr::app(PrimId prim, std::vector<Expr> args, SemType type) {
  Node n;
  n.kind = NodeKind::App;
  n.prim = prim;
  n.args = std::move(args);
  n.type = type;
  return make(std::move(n));
}

Expr Expr::partial(PrimId prim, std::vector<Expr> supplied, SemType type) {
  if (!type.is(TypeKind::Fun)) throw std::invalid_argument("partial application needs a function type");
  Node n;
  n.kind = NodeKind::Partial;
  n.prim = prim;
  n.args = std::move(supplied);
  n.type = type;
  return make(std::move(n));
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind() || a.type() != b.type() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case NodeKind::Var:
      return a.var() == b.var();
    case NodeKind::Const:
      return equal(a.constant_value(), b.constant_value());
    case NodeKind::App:
    case NodeKind::Partial:
      if (a.prim() != b.prim() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!structurally_equal(a.args()[i], b.args()[i])) return false;
      return true;
  }
  return false;
}

namespace {

void collect(const Expr& e, Path& path, int edges, std::vector<NodeRef>& out) {
  out.push_back(NodeRef{path, edges, e});
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    path.push_back(static_cast<std::uint8_t>(i));
    collect(e.args()[i], path, edges + 1, out);
    path.pop_back();
  }
}

Expr with_arg(const Expr& e, std::size_t i, Expr replacement) {
  std::vector<Expr> args = e.args();
  args[i] = std::move(replacement);
  return e.kind() == NodeKind::App ? Expr::app(e.prim(), std::move(args), e.type())
                                   : Expr::partial(e.prim(), std::move(args), e.type());
}

Expr replace_rec(const Expr& e, const Path& path, std::size_t k, const Expr& replacement) {
  if (k == path.size()) return replacement;
  std::size_t i = path[k];
  if (i >= e.args().size()) throw std::out_of_range("bad expression path");
  return with_arg(e, i, replace_rec(e.args()[i], path, k + 1, replacement));
}

}  // namespace

std::vector<NodeRef> collect_nodes(const Expr& root) {
  std::vector<NodeRef> out;
  out.reserve(static_cast<std::size_t>(root.size()));
  Path path;
  collect(root, path, 0, out);
  return out;
}

Expr subtree_at(const Expr& root, const Path& path) {
  Expr cur = root;
  for (std::uint8_t i : path) {
    if (i >= cur.args().size()) throw std::out_of_range("bad expression path");
    cur = cur.args()[i];
  }
  return cur;
}

Expr replace_at(const Expr& root, const Path& path, const Expr& replacement) {
  return replace_rec(root, path, 0, replacement);
}

ScopeTypes Scope::types() const {
  ScopeTypes out;
  out.reserve(bindings.size());
  for (const auto& b : bindings) out.push_back({b.name, b.type});
  return out;
}

Env Scope::env() const {
  Env env;
  for (const auto& b : bindings) env.bind(b.name, b.value);
  return env;
}

namespace {

class Checker {
 public:
  Checker(const ScopeTypes& scope, const Registry& reg) : scope_(scope), reg_(reg) {}

  std::optional<SemType> check(const Expr& e) {
    if (e.type().has_vars()) return fail(e, "node type has unresolved variables");
    switch (e.kind()) {
      case NodeKind::Var: {
        for (const auto& b : scope_)
          if (b.name == e.name()) {
            if (b.type != e.type()) return fail(e, "variable annotated " + e.type().str() +
                                                       " but bound at " + b.type.str());
            return e.type();
          }
        return fail(e, "unbound variable '" + e.name() + "'");
      }
      case NodeKind::Const:
        if (!inhabits(e.constant_value(), e.type())) return fail(e, "constant does not inhabit its type");
        return e.type();
      case NodeKind::App:
      case NodeKind::Partial: {
        if (e.prim() >= reg_.size()) return fail(e, "unknown primitive");
        const Primitive& p = reg_.at(e.prim());
        std::size_t want = e.kind() == NodeKind::App ? p.arity() : p.arity() - 1;
        if (p.arity() == 0 || e.args().size() != want) return fail(e, "wrong number of arguments");
        SemType built = e.type();
        std::vector<SemType> child_types;
        for (const Expr& c : e.args()) {
          auto t = check(c);
          if (!t) return std::nullopt;
          child_types.push_back(*t);
        }
        for (auto it = child_types.rbegin(); it != child_types.rend(); ++it) built = SemType::fun(*it, built);
        auto s = unify(p.as_type(), built);
        if (!s) return fail(e, "arguments do not match " + p.name + " :: " + p.as_type().str());
        if (!p.admits(*s)) return fail(e, p.name + " at a function type");
        return e.type();
      }
    }
    return std::nullopt;
  }

  std::string error;

 private:
  std::optional<SemType> fail(const Expr& e, const std::string& why) {
    if (error.empty()) error = why + " at `" + render_expr(e, reg_) + "`";
    return std::nullopt;
  }

  const ScopeTypes& scope_;
  const Registry& reg_;
};

}  // namespace

TypecheckResult typecheck(const Expr& e, const ScopeTypes& scope, const Registry& reg) {
  Checker c(scope, reg);
  TypecheckResult r;
  r.type = c.check(e);
  if (!r.type) r.error = c.error;
  return r;
}

}  // namespace origami
