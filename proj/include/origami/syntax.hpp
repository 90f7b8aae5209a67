#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "origami/expr.hpp"
#include "origami/primitives.hpp"
#include "origami/value.hpp"

namespace origami {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Haskell-like rendering: `addInt (length arg0) 1`. Literals whose type is not
// evident from their text (empty non-string lists, maps) and partial
// applications carry a `:: T` annotation so the output parses back unchanged.
std::string render_expr(const Expr& e, const Registry& reg = Registry::standard());
std::string render_literal(const Value& v, SemType t);
// Untyped rendering for logs.
std::string render_value(const Value& v);

// Parses and type-infers an expression over the given scope. `expected`, when
// present, is unified with the root type.
Expr parse_expr(std::string_view text, const ScopeTypes& scope,
                std::optional<SemType> expected = std::nullopt,
                const Registry& reg = Registry::standard());

// Parses the longest expression starting at `pos` and advances it. Stops at
// reserved words (then, else, where), closing brackets, commas and `:`.
Expr parse_expr_at(std::string_view text, std::size_t& pos, const ScopeTypes& scope,
                   std::optional<SemType> expected = std::nullopt,
                   const Registry& reg = Registry::standard());

}  // namespace origami
