#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace origami {

enum class TypeKind : std::uint8_t { Int, Float, Bool, Char, List, Pair, Map, Fun, Var };

struct TypeNode;

// Hash-consed type term. Two SemTypes are equal iff they point at the same
// interned node, so copies and comparisons are pointer-cheap.
class SemType {
 public:
  SemType();  // IntT

  static SemType int_type();
  static SemType float_type();
  static SemType bool_type();
  static SemType char_type();
  static SemType string_type();  // [Char]
  static SemType list(SemType elem);
  static SemType pair(SemType fst, SemType snd);
  static SemType map(SemType key, SemType val);
  static SemType fun(SemType arg, SemType ret);
  static SemType var(std::string_view name);

  TypeKind kind() const;
  bool is(TypeKind k) const { return kind() == k; }

  // Component accessors; only valid for the matching kind.
  SemType elem() const;
  SemType first() const;
  SemType second() const;
  SemType key() const { return first(); }
  SemType val() const { return second(); }
  SemType arg() const { return first(); }
  SemType ret() const { return second(); }
  const std::string& var_name() const;

  bool has_vars() const;
  bool contains_fun() const;
  bool is_string() const;

  std::string str() const;

  bool operator==(const SemType& o) const { return node_ == o.node_; }
  bool operator!=(const SemType& o) const { return node_ != o.node_; }
  // Structural, deterministic order (not pointer order).
  bool operator<(const SemType& o) const;
  std::size_t hash() const { return reinterpret_cast<std::size_t>(node_); }

 private:
  explicit SemType(const TypeNode* n) : node_(n) {}
  static SemType intern(TypeKind k, const TypeNode* a, const TypeNode* b, std::string_view name);
  const TypeNode* node_;
};

struct SemTypeHash {
  std::size_t operator()(const SemType& t) const { return t.hash(); }
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Substitution = std::map<std::string, SemType>;

SemType substitute(const Substitution& s, SemType t);

// Most general unifier; std::nullopt on constructor clash or occurs-check.
std::optional<Substitution> unify(SemType t1, SemType t2);
// Extends an existing substitution.
std::optional<Substitution> unify(SemType t1, SemType t2, Substitution s);

// Collects type variable names in first-occurrence order.
void free_vars(SemType t, std::vector<std::string>& out);

// Parses the surface syntax produced by SemType::str(): Int, Float, Bool,
// Char, [T], (A, B), Map K V, A -> B, lowercase type variables.
SemType parse_type(std::string_view text);

struct Signature {
  std::vector<SemType> args;
  SemType out;

  std::string str() const;  // "Int -> Float -> Float"
  bool operator==(const Signature&) const = default;
};

Signature parse_signature(std::string_view text);

// Constructor set enabled for a problem. Fun is always permitted so that
// scaffold-provided function bindings stay usable.
class TypeEnv {
 public:
  TypeEnv() = default;
  TypeEnv(std::initializer_list<TypeKind> kinds);

  static TypeEnv all();

  bool allows(TypeKind k) const;
  bool admits(SemType t) const;  // every constructor in t is allowed
  void allow(TypeKind k) { bits_ |= bit(k); }

  // Base types in the env, in kind order.
  std::vector<SemType> base_types() const;

 private:
  static std::uint32_t bit(TypeKind k) { return 1u << static_cast<unsigned>(k); }
  std::uint32_t bits_ = 0;
};

}  // namespace origami
