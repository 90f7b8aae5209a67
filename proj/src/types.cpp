#include "origami/types.hpp"

#include <cctype>
#include <functional>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace origami {

struct TypeNode {
  TypeKind kind;
  const TypeNode* a;
  const TypeNode* b;
  std::string name;
  bool has_vars;
  bool contains_fun;
};

namespace {

struct Key {
  TypeKind kind;
  const TypeNode* a;
  const TypeNode* b;
  std::string name;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = std::hash<int>{}(static_cast<int>(k.kind));
    h = h * 1000003u ^ std::hash<const void*>{}(k.a);
    h = h * 1000003u ^ std::hash<const void*>{}(k.b);
    h = h * 1000003u ^ std::hash<std::string>{}(k.name);
    return h;
  }
};

struct Interner {
  std::mutex mu;
  std::unordered_map<Key, std::unique_ptr<TypeNode>, KeyHash> table;
};

Interner& interner() {
  static Interner* in = new Interner();  // never destroyed: nodes outlive statics
  return *in;
}

}  // namespace

SemType SemType::intern(TypeKind k, const TypeNode* a, const TypeNode* b, std::string_view name) {
  Interner& in = interner();
  Key key{k, a, b, std::string(name)};
  std::lock_guard<std::mutex> lock(in.mu);
  auto it = in.table.find(key);
  if (it != in.table.end()) return SemType(it->second.get());
  auto node = std::make_unique<TypeNode>();
  node->kind = k;
  node->a = a;
  node->b = b;
  node->name = std::string(name);
  node->has_vars = k == TypeKind::Var || (a && a->has_vars) || (b && b->has_vars);
  node->contains_fun = k == TypeKind::Fun || (a && a->contains_fun) || (b && b->contains_fun);
  const TypeNode* raw = node.get();
  in.table.emplace(std::move(key), std::move(node));
  return SemType(raw);
}

SemType::SemType() : SemType(int_type()) {}

SemType SemType::int_type() {
  static const SemType t = intern(TypeKind::Int, nullptr, nullptr, "");
  return t;
}
SemType SemType::float_type() {
  static const SemType t = intern(TypeKind::Float, nullptr, nullptr, "");
  return t;
}
SemType SemType::bool_type() {
  static const SemType t = intern(TypeKind::Bool, nullptr, nullptr, "");
  return t;
}
SemType SemType::char_type() {
  static const SemType t = intern(TypeKind::Char, nullptr, nullptr, "");
  return t;
}
SemType SemType::string_type() {
  static const SemType t = list(char_type());
  return t;
}
SemType SemType::list(SemType elem) { return intern(TypeKind::List, elem.node_, nullptr, ""); }
SemType SemType::pair(SemType fst, SemType snd) {
  return intern(TypeKind::Pair, fst.node_, snd.node_, "");
}
SemType SemType::map(SemType key, SemType val) {
  return intern(TypeKind::Map, key.node_, val.node_, "");
}
SemType SemType::fun(SemType arg, SemType ret) {
  return intern(TypeKind::Fun, arg.node_, ret.node_, "");
}
SemType SemType::var(std::string_view name) { return intern(TypeKind::Var, nullptr, nullptr, name); }

TypeKind SemType::kind() const { return node_->kind; }
SemType SemType::elem() const { return SemType(node_->a); }
SemType SemType::first() const { return SemType(node_->a); }
SemType SemType::second() const { return SemType(node_->b); }
const std::string& SemType::var_name() const { return node_->name; }
bool SemType::has_vars() const { return node_->has_vars; }
bool SemType::contains_fun() const { return node_->contains_fun; }
bool SemType::is_string() const { return *this == string_type(); }

bool SemType::operator<(const SemType& o) const {
  if (node_ == o.node_) return false;
  if (kind() != o.kind()) return kind() < o.kind();
  switch (kind()) {
    case TypeKind::Var:
      return var_name() < o.var_name();
    case TypeKind::List:
      return elem() < o.elem();
    case TypeKind::Pair:
    case TypeKind::Map:
    case TypeKind::Fun:
      if (first() != o.first()) return first() < o.first();
      return second() < o.second();
    default:
      return false;
  }
}

std::string SemType::str() const {
  switch (kind()) {
    case TypeKind::Int:
      return "Int";
    case TypeKind::Float:
      return "Float";
    case TypeKind::Bool:
      return "Bool";
    case TypeKind::Char:
      return "Char";
    case TypeKind::Var:
      return var_name();
    case TypeKind::List:
      return "[" + elem().str() + "]";
    case TypeKind::Pair:
      return "(" + first().str() + ", " + second().str() + ")";
    case TypeKind::Map: {
      auto atom = [](SemType t) {
        std::string s = t.str();
        if (t.is(TypeKind::Map) || t.is(TypeKind::Fun)) return "(" + s + ")";
        return s;
      };
      return "Map " + atom(key()) + " " + atom(val());
    }
    case TypeKind::Fun: {
      std::string lhs = arg().str();
      if (arg().is(TypeKind::Fun)) lhs = "(" + lhs + ")";
      return lhs + " -> " + ret().str();
    }
  }
  return "?";
}

SemType substitute(const Substitution& s, SemType t) {
  if (!t.has_vars() || s.empty()) return t;
  switch (t.kind()) {
    case TypeKind::Var: {
      auto it = s.find(t.var_name());
      if (it == s.end()) return t;
      // Bindings may mention other bound variables while unification is in
      // progress; resolve transitively.
      return it->second == t ? t : substitute(s, it->second);
    }
    case TypeKind::List:
      return SemType::list(substitute(s, t.elem()));
    case TypeKind::Pair:
      return SemType::pair(substitute(s, t.first()), substitute(s, t.second()));
    case TypeKind::Map:
      return SemType::map(substitute(s, t.key()), substitute(s, t.val()));
    case TypeKind::Fun:
      return SemType::fun(substitute(s, t.arg()), substitute(s, t.ret()));
    default:
      return t;
  }
}

namespace {

bool occurs(const std::string& name, SemType t) {
  if (!t.has_vars()) return false;
  switch (t.kind()) {
    case TypeKind::Var:
      return t.var_name() == name;
    case TypeKind::List:
      return occurs(name, t.elem());
    case TypeKind::Pair:
    case TypeKind::Map:
    case TypeKind::Fun:
      return occurs(name, t.first()) || occurs(name, t.second());
    default:
      return false;
  }
}

bool unify_into(SemType a, SemType b, Substitution& s) {
  a = substitute(s, a);
  b = substitute(s, b);
  if (a == b) return true;
  if (a.is(TypeKind::Var)) {
    if (occurs(a.var_name(), b)) return false;
    s[a.var_name()] = b;
    return true;
  }
  if (b.is(TypeKind::Var)) return unify_into(b, a, s);
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::List:
      return unify_into(a.elem(), b.elem(), s);
    case TypeKind::Pair:
    case TypeKind::Map:
    case TypeKind::Fun:
      return unify_into(a.first(), b.first(), s) && unify_into(a.second(), b.second(), s);
    default:
      return false;  // distinct base types
  }
}

}  // namespace

std::optional<Substitution> unify(SemType t1, SemType t2, Substitution s) {
  if (!unify_into(t1, t2, s)) return std::nullopt;
  // Normalise so every binding is fully resolved.
  Substitution out;
  for (const auto& [k, v] : s) out[k] = substitute(s, v);
  return out;
}

std::optional<Substitution> unify(SemType t1, SemType t2) { return unify(t1, t2, {}); }

void free_vars(SemType t, std::vector<std::string>& out) {
  if (!t.has_vars()) return;
  switch (t.kind()) {
    case TypeKind::Var:
      for (const auto& n : out)
        if (n == t.var_name()) return;
      out.push_back(t.var_name());
      return;
    case TypeKind::List:
      free_vars(t.elem(), out);
      return;
    case TypeKind::Pair:
    case TypeKind::Map:
    case TypeKind::Fun:
      free_vars(t.first(), out);
      free_vars(t.second(), out);
      return;
    default:
      return;
  }
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  SemType parse_all() {
    SemType t = parse_fun();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw TypeError("type syntax error at " + std::to_string(pos_) + " in '" + std::string(s_) +
                    "': " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }

  SemType parse_fun() {
    SemType lhs = parse_app();
    if (eat("->")) return SemType::fun(lhs, parse_fun());
    return lhs;
  }

  SemType parse_app() {
    skip_ws();
    if (s_.substr(pos_, 3) == "Map" &&
        (pos_ + 3 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 3])))) {
      pos_ += 3;
      SemType k = parse_atom();
      SemType v = parse_atom();
      return SemType::map(k, v);
    }
    return parse_atom();
  }

  SemType parse_atom() {
    if (eat("[")) {
      SemType e = parse_fun();
      if (!eat("]")) fail("expected ']'");
      return SemType::list(e);
    }
    if (eat("(")) {
      SemType a = parse_fun();
      if (eat(",")) {
        SemType b = parse_fun();
        if (!eat(")")) fail("expected ')'");
        return SemType::pair(a, b);
      }
      if (!eat(")")) fail("expected ')'");
      return a;
    }
    std::string id = ident();
    if (id == "Int") return SemType::int_type();
    if (id == "Float") return SemType::float_type();
    if (id == "Bool") return SemType::bool_type();
    if (id == "Char") return SemType::char_type();
    if (id == "String") return SemType::string_type();
    if (std::islower(static_cast<unsigned char>(id[0])) || id[0] == '_') return SemType::var(id);
    fail("unknown type '" + id + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

SemType parse_type(std::string_view text) { return TypeParser(text).parse_all(); }

std::string Signature::str() const {
  std::string text;
  for (const auto& a : args) {
    std::string s = a.str();
    if (a.is(TypeKind::Fun)) s = "(" + s + ")";
    text += s + " -> ";
  }
  return text + out.str();
}

Signature parse_signature(std::string_view text) {
  SemType t = parse_type(text);
  Signature sig;
  while (t.is(TypeKind::Fun)) {
    sig.args.push_back(t.arg());
    t = t.ret();
  }
  sig.out = t;
  if (sig.args.empty()) throw TypeError("signature needs at least one argument: " + std::string(text));
  return sig;
}

TypeEnv::TypeEnv(std::initializer_list<TypeKind> kinds) {
  for (TypeKind k : kinds) allow(k);
}

TypeEnv TypeEnv::all() {
  return TypeEnv{TypeKind::Int,  TypeKind::Float, TypeKind::Bool, TypeKind::Char,
                 TypeKind::List, TypeKind::Pair,  TypeKind::Map};
}

bool TypeEnv::allows(TypeKind k) const {
  if (k == TypeKind::Fun || k == TypeKind::Var) return true;
  return (bits_ & bit(k)) != 0;
}

bool TypeEnv::admits(SemType t) const {
  if (!allows(t.kind())) return false;
  switch (t.kind()) {
    case TypeKind::List:
      return admits(t.elem());
    case TypeKind::Pair:
    case TypeKind::Map:
    case TypeKind::Fun:
      return admits(t.first()) && admits(t.second());
    default:
      return true;
  }
}

std::vector<SemType> TypeEnv::base_types() const {
  std::vector<SemType> out;
  if (allows(TypeKind::Int)) out.push_back(SemType::int_type());
  if (allows(TypeKind::Float)) out.push_back(SemType::float_type());
  if (allows(TypeKind::Bool)) out.push_back(SemType::bool_type());
  if (allows(TypeKind::Char)) out.push_back(SemType::char_type());
  return out;
}

}  // namespace origami
