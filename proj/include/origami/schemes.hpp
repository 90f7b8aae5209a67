#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "origami/expr.hpp"
#include "origami/interpreter.hpp"
#include "origami/primitives.hpp"
#include "origami/types.hpp"

namespace origami {

// Listed in escalation order.
enum class PatternKind : std::uint8_t { NoScheme, Cata, CurriedCata, Ana, Accu, Hylo };

inline constexpr std::array<PatternKind, 6> kAllPatterns = {
    PatternKind::NoScheme, PatternKind::Cata, PatternKind::CurriedCata,
    PatternKind::Ana,      PatternKind::Accu, PatternKind::Hylo};

int pattern_rank(PatternKind k);  // 1..6
std::string_view pattern_name(PatternKind k);  // "noscheme", "cata", ...
std::optional<PatternKind> parse_pattern(std::string_view name);  // case-insensitive
bool needs_unbound(PatternKind k);

struct SlotSpec {
  int index = 1;  // 1-based, as in the scaffold text
  SemType out;
  ScopeTypes scope;
};

struct PatternInstance {
  PatternKind kind = PatternKind::NoScheme;
  Signature sig;
  std::optional<SemType> unbound;  // the `a` of Accu and Hylo
  std::vector<SlotSpec> slots;
};

class SchemeError : public std::runtime_error {
 public:
  enum class Code { NotApplicable, MissingUnboundType, BadProgram };
  SchemeError(Code c, const std::string& what) : std::runtime_error(what), code(c) {}
  Code code;
};

std::string arg_name(std::size_t i);  // "arg0", "arg1", ...

bool applicable(PatternKind k, const Signature& sig);

// Throws SchemeError when the pattern does not fit the signature or the
// unbound type is missing (or supplied for a pattern that has none).
PatternInstance instantiate(PatternKind k, const Signature& sig,
                            std::optional<SemType> unbound = std::nullopt);

struct Limits {
  std::int64_t iter_cap = kIterationCap;
  std::int64_t per_iter_ops = kPerIterationOps;
  std::int64_t global_ops = kGlobalOps;
};

// Runs the scaffold with the given slot bodies on one input tuple.
EvalOutcome execute(const PatternInstance& inst, const std::vector<Expr>& slots,
                    const std::vector<Value>& inputs, const Limits& limits = {},
                    const Registry& reg = Registry::standard());

// Scaffold text with the slots inlined, e.g.
//   f arg0 = cata alg arg0 where
//     alg INil = 0
//     alg (ICons i x acc) = addInt 1 acc
std::string render_program(const PatternInstance& inst, const std::vector<Expr>& slots,
                           const Registry& reg = Registry::standard());

// Inverse of render_program. Whitespace between fixed scaffold tokens is free.
std::vector<Expr> parse_program(const PatternInstance& inst, std::string_view text,
                                const Registry& reg = Registry::standard());

}  // namespace origami
