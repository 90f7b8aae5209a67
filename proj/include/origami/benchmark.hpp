#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "origami/evolve.hpp"
#include "origami/interpreter.hpp"
#include "origami/schemes.hpp"
#include "origami/types.hpp"
#include "origami/value.hpp"

namespace origami {

inline constexpr double kPenalty = 1e6;

enum class MetricKind { AbsIntDiff, AbsFloatDiff, BoolMismatch, Levenshtein, SeqNumDiff, Composite };

struct FitnessMetric {
  MetricKind kind = MetricKind::AbsIntDiff;
  double tolerance = 0;         // AbsFloatDiff: differences below this count as 0
  double length_penalty = 1e3;  // SeqNumDiff: per element of length mismatch
  std::vector<FitnessMetric> parts;  // Composite: one per pair component

  static FitnessMetric of(MetricKind k, double tol = 0, double penalty = 1e3) {
    FitnessMetric m;
    m.kind = k;
    m.tolerance = tol;
    m.length_penalty = penalty;
    return m;
  }
  static FitnessMetric abs_int() { return of(MetricKind::AbsIntDiff); }
  static FitnessMetric abs_float(double tol = 0) { return of(MetricKind::AbsFloatDiff, tol); }
  static FitnessMetric bool_mismatch() { return of(MetricKind::BoolMismatch); }
  static FitnessMetric levenshtein() { return of(MetricKind::Levenshtein); }
  static FitnessMetric seq_num_diff(double penalty = 1e3) { return of(MetricKind::SeqNumDiff, 0, penalty); }
  static FitnessMetric composite(FitnessMetric a, FitnessMetric b) {
    FitnessMetric m = of(MetricKind::Composite);
    m.parts = {std::move(a), std::move(b)};
    return m;
  }

  // Error between expected and actual, capped at kPenalty.
  double operator()(const Value& expected, const Value& actual) const;
};

// Edit distance between two lists (element equality under compare()).
std::size_t levenshtein(const ValueList& a, const ValueList& b);

struct Problem {
  using Inputs = std::vector<Value>;

  std::string name;
  Signature sig;
  TypeEnv env;
  std::map<PatternKind, SemType> unbound;  // Accu/Hylo `a`; Int when absent
  ConstantPool pool;
  std::function<Inputs(Rng&)> sampler;
  std::function<Value(const Inputs&)> oracle;
  std::vector<Inputs> edge_cases;
  int n_train = 100;
  int n_test = 1000;
  FitnessMetric metric;
  PatternKind canonical = PatternKind::NoScheme;

  SemType unbound_for(PatternKind k) const;
};

// Every registered problem, sorted by name.
const std::vector<Problem>& problems();
const Problem* find_problem(std::string_view name);
std::vector<std::string> problem_names();

struct Case {
  std::vector<Value> inputs;
  Value expected;
};

struct Dataset {
  std::string problem;
  std::uint64_t seed = 0;
  Signature sig;
  std::vector<Case> train;
  std::vector<Case> test;
};

// Deterministic in (problem, seed, sizes). Edge cases come first in train;
// train always holds every edge case even if n_train is smaller.
Dataset materialize(const Problem& p, std::uint64_t seed, std::optional<int> n_train = std::nullopt,
                    std::optional<int> n_test = std::nullopt);

double score_case(const FitnessMetric& m, const Value& expected, const EvalOutcome& outcome);

// Sum of per-case errors. PerIterationBudget aborts the individual: that case
// and all remaining ones score the penalty.
double fitness(const std::vector<Expr>& slots, const PatternInstance& inst, const std::vector<Case>& cases,
               const FitnessMetric& m, const Limits& limits = {});
// Number of cases with non-zero error.
std::size_t test_errors(const std::vector<Expr>& slots, const PatternInstance& inst,
                        const std::vector<Case>& cases, const FitnessMetric& m, const Limits& limits = {});

// JSON-lines datasets: a header record, then one record per case.
void write_dataset(std::ostream& os, const Dataset& d);
Dataset read_dataset(std::istream& is);

}  // namespace origami
