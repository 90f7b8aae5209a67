#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "origami/benchmark.hpp"
#include "origami/runner.hpp"
#include "origami/schemes.hpp"
#include "origami/syntax.hpp"

using namespace origami;

namespace {

constexpr int kConfigExit = 2;

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const std::string& x : xs) s += (s.empty() ? "" : ", ") + x;
  return s;
}

void check_problem(const std::string& name) {
  if (!find_problem(name)) throw ConfigError("unknown problem '" + name + "' (valid: " + join(problem_names()) + ")");
}

PatternKind check_pattern(const std::string& name) {
  auto k = parse_pattern(name);
  if (!k) {
    std::vector<std::string> valid{"auto"};
    for (PatternKind p : kAllPatterns) valid.emplace_back(pattern_name(p));
    throw ConfigError("unknown pattern '" + name + "' (valid: " + join(valid) + ")");
  }
  return *k;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunFlags {
  std::string problem, pattern, out, config, unbound, champions;
  int seeds = 0, pop = 0, train = 0, test = 0, jobs = 0;
  std::int64_t max_evals = 0;
  bool check_types = false;
};

int do_run(const RunFlags& f, const CLI::App& cmd) {
  Campaign c;
  if (!f.config.empty()) apply_config_file(f.config, c);
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  if (given("--problem")) c.problem = f.problem;
  if (c.problem.empty()) throw ConfigError("--problem is required (or set problem in the config file)");
  check_problem(c.problem);
  if (given("--pattern")) {
    if (f.pattern == "auto") c.fixed.reset();
    else c.fixed = check_pattern(f.pattern);
  }
  if (given("--seeds")) c.seeds = Campaign::default_seeds(f.seeds);
  if (given("--pop")) c.cfg.pop_size = f.pop;
  if (given("--max-evals")) c.cfg.max_evals = f.max_evals;
  if (given("--train")) c.n_train = f.train;
  if (given("--test")) c.n_test = f.test;
  if (given("--out")) c.output_path = f.out;
  if (given("--jobs")) c.jobs = f.jobs;
  if (given("--champions")) c.champions_dir = f.champions;
  if (given("--check-types")) c.cfg.check_types = f.check_types;
  if (given("--unbound-type")) {
    try {
      c.unbound = parse_type(f.unbound);
    } catch (const std::exception& e) {
      throw ConfigError("invalid --unbound-type: " + std::string(e.what()));
    }
  }
  c.validate();

  const bool to_stdout = c.output_path.empty();
  run_campaign(c, [&](const RunRecord& r) {
    std::cerr << r.problem << " " << pattern_name(r.pattern) << " seed " << r.seed << ": "
              << (r.success ? "success" : "failure") << " (train " << r.train_fitness << ", test errors "
              << r.test_errors << ", " << r.evals_used << " evals, " << r.wall_time_seconds << " s)\n";
    if (to_stdout) std::cout << to_json_line(r) << '\n' << std::flush;
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typed GP program synthesis over recursion-scheme scaffolds"};
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* run = app.add_subcommand("run", "Run a multi-seed campaign, escalating through patterns");
  run->add_option("--problem", rf.problem, "Benchmark problem name");
  run->add_option("--pattern", rf.pattern, "auto|noscheme|cata|curriedcata|ana|accu|hylo")->default_str("auto");
  run->add_option("--seeds", rf.seeds, "Number of seeds (0..N-1)")->check(CLI::PositiveNumber);
  run->add_option("--pop", rf.pop, "Population size")->check(CLI::PositiveNumber);
  run->add_option("--max-evals", rf.max_evals, "Evaluation budget per run")->check(CLI::PositiveNumber);
  run->add_option("--train", rf.train, "Training cases")->check(CLI::PositiveNumber);
  run->add_option("--test", rf.test, "Test cases")->check(CLI::PositiveNumber);
  run->add_option("--out", rf.out, "Append RunRecords (JSON-lines) here; resumes if present");
  run->add_option("--config", rf.config, "Flat key = value config file")->check(CLI::ExistingFile);
  run->add_option("--jobs", rf.jobs, "Seeds run in parallel")->check(CLI::PositiveNumber);
  run->add_option("--unbound-type", rf.unbound, "Unbound type for Accu/Hylo, e.g. \"(Float, Int)\"");
  run->add_option("--champions", rf.champions, "Directory for champion files");
  run->add_flag("--check-types", rf.check_types, "Typecheck every individual (slow)");

  std::string dg_problem, dg_out;
  std::uint64_t dg_seed = 0;
  int dg_train = 0, dg_test = 0;
  CLI::App* datagen = app.add_subcommand("datagen", "Materialize a dataset as JSON-lines");
  datagen->add_option("--problem", dg_problem, "Benchmark problem name")->required();
  datagen->add_option("--seed", dg_seed, "Dataset seed");
  datagen->add_option("--train", dg_train, "Training cases")->check(CLI::PositiveNumber);
  datagen->add_option("--test", dg_test, "Test cases")->check(CLI::PositiveNumber);
  datagen->add_option("--out", dg_out, "Output file (default stdout)");

  std::string ev_champion, ev_dataset;
  CLI::App* eval = app.add_subcommand("eval", "Score a champion file against a dataset");
  eval->add_option("champion", ev_champion, "Champion file")->required()->check(CLI::ExistingFile);
  eval->add_option("--dataset", ev_dataset, "JSON-lines dataset (default: regenerate from the header)")
      ->check(CLI::ExistingFile);

  std::vector<std::string> rp_inputs;
  std::string rp_format = "markdown", rp_out;
  CLI::App* rep = app.add_subcommand("report", "Aggregate RunRecords into a success-rate table");
  rep->add_option("records", rp_inputs, "RunRecord JSON-lines files")->required()->check(CLI::ExistingFile);
  rep->add_option("--format", rp_format, "csv|markdown")->check(CLI::IsMember({"csv", "markdown"}));
  rep->add_option("--out", rp_out, "Output file (default stdout)");

  app.add_subcommand("problems", "List benchmark problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run) return do_run(rf, *run);

    if (*datagen) {
      check_problem(dg_problem);
      const Problem& p = *find_problem(dg_problem);
      std::optional<int> tr, te;
      if (datagen->count("--train")) tr = dg_train;
      if (datagen->count("--test")) te = dg_test;
      const Dataset d = materialize(p, dg_seed, tr, te);
      if (dg_out.empty()) {
        write_dataset(std::cout, d);
      } else {
        std::ofstream out(dg_out);
        if (!out) throw ConfigError("cannot write " + dg_out);
        write_dataset(out, d);
      }
      return 0;
    }

    if (*eval) {
      const Champion ch = parse_champion(read_file(ev_champion));
      check_problem(ch.problem);
      std::optional<Dataset> d;
      if (!ev_dataset.empty()) {
        std::ifstream in(ev_dataset);
        d = read_dataset(in);
      }
      const EvalReport r = evaluate_champion(ch, d);
      std::cout << "trainFitness: " << r.train_fitness << "\ntrainCases: " << r.train_cases
                << "\ntestErrors: " << r.test_errors << "\ntestCases: " << r.test_cases << '\n';
      return 0;
    }

    if (*rep) {
      std::vector<RunRecord> all;
      for (const std::string& path : rp_inputs) {
        std::ifstream in(path);
        auto recs = read_records(in);
        all.insert(all.end(), recs.begin(), recs.end());
      }
      const auto rows = report(all);
      const std::string text = rp_format == "csv" ? report_csv(rows) : report_markdown(rows);
      if (rp_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(rp_out);
        if (!out) throw ConfigError("cannot write " + rp_out);
        out << text;
      }
      return 0;
    }

    for (const Problem& p : problems())
      std::cout << p.name << "  " << p.sig.str() << "  (" << pattern_name(p.canonical) << ")\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const SchemeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
