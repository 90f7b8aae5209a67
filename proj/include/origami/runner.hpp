#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "origami/benchmark.hpp"
#include "origami/evolve.hpp"
#include "origami/schemes.hpp"
#include "origami/types.hpp"

namespace origami {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Campaign {
  std::string problem;
  std::optional<PatternKind> fixed;  // nullopt: escalate through applicable patterns
  std::vector<std::uint64_t> seeds = default_seeds(30);
  GpConfig cfg;
  std::optional<int> n_train;  // dataset size overrides
  std::optional<int> n_test;
  std::optional<SemType> unbound;  // overrides the problem's unbound type
  std::string output_path;         // JSON-lines; empty keeps records in memory only
  std::string champions_dir;       // one champion file per run when non-empty
  int jobs = 1;

  static std::vector<std::uint64_t> default_seeds(int n);
  void validate() const;  // throws ConfigError
};

struct RunRecord {
  std::string problem;
  PatternKind pattern = PatternKind::NoScheme;
  std::uint64_t seed = 0;
  bool success = false;
  std::int64_t evals_used = 0;
  int generations = 0;
  double wall_time_seconds = 0;
  std::string champion_text;
  double train_fitness = 0;
  std::int64_t test_errors = 0;
  bool stopped_early = false;
};

// One JSON object, keys sorted, no trailing newline.
std::string to_json_line(const RunRecord& r);
RunRecord parse_record(const std::string& line);
std::vector<RunRecord> read_records(std::istream& is);
std::vector<RunRecord> read_records_file(const std::string& path);  // missing file: empty
// Appends one line under an exclusive advisory lock.
void append_record(const std::string& path, const RunRecord& r);

// Pattern instance for a problem, honouring an unbound-type override.
PatternInstance instance_for(const Problem& p, PatternKind k, std::optional<SemType> unbound = std::nullopt);

// A single seed: materialize the dataset, evolve, score on the test split.
RunRecord run_seed(const Problem& p, PatternKind k, std::uint64_t seed, const Campaign& c);

using RecordSink = std::function<void(const RunRecord&)>;

// Runs every seed of one pattern, skipping seeds present in `done`.
std::vector<RunRecord> run_pattern(const Problem& p, PatternKind k, const Campaign& c,
                                   const std::vector<RunRecord>& done, const RecordSink& sink = {});

// Patterns in rank order, skipping inapplicable ones, stopping after the
// first pattern with at least one success.
std::vector<RunRecord> escalate(const Campaign& c, const std::vector<RunRecord>& done = {},
                                const RecordSink& sink = {});

// Full campaign: resumes from output_path, appends new records, writes
// champion files. Returns every record of the campaign (old and new).
std::vector<RunRecord> run_campaign(const Campaign& c, const RecordSink& on_record = {});

// Success-rate table, one row per problem, one column per pattern.
struct ReportRow {
  std::string problem;
  std::vector<std::optional<int>> percent;  // indexed by pattern rank - 1; nullopt = never run
  int best = 0;
};
std::vector<ReportRow> report(const std::vector<RunRecord>& records);
std::string report_csv(const std::vector<ReportRow>& rows);
std::string report_markdown(const std::vector<ReportRow>& rows);

// Flat `key = value` config; `#` starts a comment. Unknown keys are errors.
void apply_config(std::istream& is, Campaign& c);
void apply_config_file(const std::string& path, Campaign& c);

// Champion files: `-- key: value` header lines followed by the program text.
struct Champion {
  std::string problem;
  PatternKind pattern = PatternKind::NoScheme;
  std::optional<SemType> unbound;
  std::uint64_t seed = 0;
  std::optional<int> n_train;
  std::optional<int> n_test;
  std::string program;
};
std::string champion_file_text(const Champion& ch);
Champion parse_champion(std::string_view text);
std::string champion_file_name(const RunRecord& r);

struct EvalReport {
  double train_fitness = 0;
  std::size_t train_cases = 0;
  std::size_t test_errors = 0;
  std::size_t test_cases = 0;
};
// Scores a champion against a dataset (the champion's own when absent).
EvalReport evaluate_champion(const Champion& ch, const std::optional<Dataset>& dataset = std::nullopt);

}  // namespace origami
