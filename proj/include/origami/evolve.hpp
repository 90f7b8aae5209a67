#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "origami/expr.hpp"
#include "origami/primitives.hpp"
#include "origami/schemes.hpp"
#include "origami/types.hpp"

namespace origami {

using Rng = std::mt19937_64;

struct GpConfig {
  int pop_size = 1000;
  int tournament_k = 10;
  double crossover_rate = 0.5;
  int max_depth = 5;
  int ramp_min = 1;
  int ramp_max = 5;
  std::int64_t max_evals = 300'000;
  std::uint64_t seed = 0;
  // Typecheck every evaluated individual and refinement candidate (slow; for tests).
  bool check_types = false;

  void validate() const;  // throws std::invalid_argument
};

struct Individual {
  std::vector<Expr> slots;
  double fitness = 0;
  bool evaluated = false;

  int total_size() const;
};

// Ephemeral constants offered as terminals.
struct ConstantPool {
  std::vector<std::int64_t> ints{-1, 0, 1, 2, 3, 10, 100};
  std::vector<double> floats{0.0, 1.0, 2.0, -1.0, 0.5};
  std::vector<char32_t> chars{'a', 'z', 'A', 'Z', '0', '9', ' ', '\n', '*', '!'};
  std::vector<std::u32string> strings;  // extra [Char] literals besides ""
};

class UnsatisfiableType : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Random typed tree construction for one slot (fixed scope).
class SlotGenerator {
 public:
  SlotGenerator(const SlotSpec& spec, const TypeEnv& env, const ConstantPool& pool,
                const Registry& reg = Registry::standard());

  enum class Method { Grow, Full };

  // nullopt when no tree of type t fits within max_depth.
  std::optional<Expr> generate(SemType t, int max_depth, Method m, Rng& rng);
  std::optional<Expr> grow(SemType t, int max_depth, Rng& rng) { return generate(t, max_depth, Method::Grow, rng); }
  std::optional<Expr> full(SemType t, int max_depth, Rng& rng) { return generate(t, max_depth, Method::Full, rng); }
  std::optional<Expr> terminal(SemType t, Rng& rng);

  bool can_make(SemType t, int depth);
  const SlotSpec& spec() const { return spec_; }
  const std::vector<SemType>& universe() const { return universe_; }

  static constexpr double kTerminalProb = 0.3;
  static constexpr double kVariableProb = 0.7;

 private:
  struct Option {
    PrimId prim;
    bool partial;
    std::vector<SemType> arg_types;
    SemType type;
  };
  const std::vector<Option>& options(SemType t);
  bool has_terminal(SemType t);
  bool has_constant(SemType t) const;
  Value random_constant(SemType t, Rng& rng) const;
  std::vector<const Option*> viable(SemType t, int depth);

  SlotSpec spec_;
  TypeEnv env_;
  ConstantPool pool_;
  const Registry& reg_;
  std::vector<SemType> universe_;
  bool fun_in_scope_ = false;
  std::map<SemType, std::vector<Option>> options_;
  std::map<std::pair<SemType, int>, bool> can_make_;
};

// One generator per slot of a pattern instance.
class Generator {
 public:
  Generator(const PatternInstance& inst, const TypeEnv& env, const ConstantPool& pool,
            const Registry& reg = Registry::standard());
  SlotGenerator& slot(std::size_t k) { return slots_.at(k); }
  std::size_t size() const { return slots_.size(); }
  const PatternInstance& instance() const { return inst_; }

 private:
  PatternInstance inst_;
  std::vector<SlotGenerator> slots_;
};

using FitnessFn = std::function<double(const Individual&)>;

std::vector<Individual> init_population(Generator& gen, const GpConfig& cfg, Rng& rng);
const Individual& tournament_select(const std::vector<Individual>& pop, int k, Rng& rng);
Individual mutate(const Individual& ind, Generator& gen, const GpConfig& cfg, Rng& rng);
Individual crossover(const Individual& p1, const Individual& p2, const GpConfig& cfg, Rng& rng);
Individual refine(const Individual& champion, const FitnessFn& fitness);

// True when every slot typechecks against its spec.
bool typechecks(const Individual& ind, const PatternInstance& inst,
                const Registry& reg = Registry::standard());

struct GenerationStats {
  int generation = 0;
  double best = 0;
  double mean = 0;
  std::int64_t evals = 0;
};
using ProgressFn = std::function<void(const GenerationStats&)>;

struct RunResult {
  Individual champion;  // refined best-ever
  Individual unrefined;  // best-ever before refinement
  double unrefined_fitness = 0;
  std::int64_t evals_used = 0;
  int generations = 0;
  bool stopped_early = false;
  std::int64_t typechecks = 0;
  std::int64_t type_failures = 0;
};

RunResult run(Generator& gen, const FitnessFn& fitness, const GpConfig& cfg,
              const ProgressFn& progress = {});

}  // namespace origami
