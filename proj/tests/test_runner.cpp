#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "origami/runner.hpp"
#include "support.hpp"

using namespace test;
namespace fs = std::filesystem;

namespace {

RunRecord rec(std::string problem, PatternKind k, std::uint64_t seed, bool success) {
  RunRecord r;
  r.problem = std::move(problem);
  r.pattern = k;
  r.seed = seed;
  r.success = success;
  r.train_fitness = success ? 0 : 4;
  r.test_errors = success ? 0 : 9;
  return r;
}

std::vector<RunRecord> seeds_with(std::string problem, PatternKind k, int n, int successes) {
  std::vector<RunRecord> out;
  for (int s = 0; s < n; ++s) out.push_back(rec(problem, k, static_cast<std::uint64_t>(s), s < successes));
  return out;
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("origami-runner-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  fs::path p = dir / name;
  fs::remove_all(p);
  return p;
}

Campaign tiny(const std::string& problem, int seeds) {
  Campaign c;
  c.problem = problem;
  c.seeds = Campaign::default_seeds(seeds);
  c.cfg.pop_size = 20;
  c.cfg.max_evals = 40;
  c.n_train = 10;
  c.n_test = 10;
  return c;
}

}  // namespace

TEST_CASE("report percentages and placeholders") {
  std::vector<RunRecord> all = seeds_with("median", PatternKind::NoScheme, 30, 27);
  auto zero = seeds_with("grade", PatternKind::NoScheme, 30, 0);
  all.insert(all.end(), zero.begin(), zero.end());
  auto rows = report(all);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].problem == "grade");
  CHECK(rows[0].best == 0);
  CHECK(rows[1].percent[0] == 90);
  CHECK(rows[1].best == 90);
  CHECK_FALSE(rows[1].percent[1]);
  CHECK(report_csv(rows) ==
        "Dataset,NoScheme,Cata,CurriedCata,Ana,Accu,Hylo,Best\n"
        "grade,0,--,--,--,--,--,0\n"
        "median,90,--,--,--,--,--,90\n");
}

TEST_CASE("report rounds to the nearest integer and takes the best pattern") {
  auto a = seeds_with("count-odds", PatternKind::NoScheme, 30, 0);
  auto b = seeds_with("count-odds", PatternKind::Cata, 30, 12);
  a.insert(a.end(), b.begin(), b.end());
  auto c = seeds_with("sum-of-squares", PatternKind::Hylo, 3, 2);  // 66.67 -> 67
  a.insert(a.end(), c.begin(), c.end());
  auto rows = report(a);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].percent[0] == 0);
  CHECK(rows[0].percent[1] == 40);
  CHECK(rows[0].best == 40);
  CHECK(rows[1].percent[5] == 67);
}

TEST_CASE("markdown report layout") {
  auto recs = seeds_with("count-odds", PatternKind::NoScheme, 30, 0);
  auto cata = seeds_with("count-odds", PatternKind::Cata, 30, 12);
  recs.insert(recs.end(), cata.begin(), cata.end());
  auto grade = seeds_with("grade", PatternKind::Cata, 30, 30);
  recs.insert(recs.end(), grade.begin(), grade.end());
  CHECK(report_markdown(report(recs)) ==
        "| Dataset | NoScheme | Cata | CurriedCata | Ana | Accu | Hylo | Best |\n"
        "|:--|--:|--:|--:|--:|--:|--:|--:|\n"
        "| count-odds | 0 | 40 | -- | -- | -- | -- | 40 |\n"
        "| grade | -- | 100 | -- | -- | -- | -- | 100 |\n");
}

TEST_CASE("aggregation ignores record order and duplicates") {
  auto recs = seeds_with("median", PatternKind::NoScheme, 10, 3);
  auto more = seeds_with("smallest", PatternKind::NoScheme, 10, 10);
  recs.insert(recs.end(), more.begin(), more.end());
  const std::string expected = report_csv(report(recs));
  std::mt19937_64 rng(1);
  for (int n = 0; n < 10; ++n) {
    std::shuffle(recs.begin(), recs.end(), rng);
    CHECK(report_csv(report(recs)) == expected);
  }
  auto doubled = recs;
  doubled.insert(doubled.end(), recs.begin(), recs.end());
  CHECK(report_csv(report(doubled)) == expected);
}

TEST_CASE("run records round-trip through JSON with sorted keys") {
  RunRecord r = rec("grade", PatternKind::Cata, 7, true);
  r.evals_used = 1234;
  r.generations = 3;
  r.wall_time_seconds = 1.5;
  r.champion_text = "f arg0 arg1 = cata alg arg0 where\n  alg INil = 'F'\n";
  r.stopped_early = true;
  const std::string line = to_json_line(r);
  CHECK(line.find('\n') == std::string::npos);
  const char* keys[] = {"championText", "evalsUsed", "generations", "pattern",     "problem",        "seed",
                        "stoppedEarly", "success",   "testErrors",  "trainFitness", "wallTimeSeconds"};
  std::size_t last = 0;
  for (const char* k : keys) {
    const auto at = line.find(std::string("\"") + k + "\"");
    REQUIRE_MESSAGE(at != std::string::npos, k);
    CHECK(at >= last);
    last = at;
  }
  RunRecord back = parse_record(line);
  CHECK(to_json_line(back) == line);
  CHECK(back.pattern == PatternKind::Cata);
  CHECK(back.champion_text == r.champion_text);
  std::stringstream two(line + "\n\n" + line + "\n");
  CHECK(read_records(two).size() == 2);
}

TEST_CASE("config files") {
  Campaign c;
  std::stringstream ok(
      "# scaled run\n"
      "problem = count-odds\n"
      "pattern = cata   # fixed\n"
      "seed_list = 3, 5, 8\n"
      "pop_size = 500\n"
      "max_evals = 75000\n"
      "crossover_rate = 0.25\n"
      "train = 100\n"
      "unbound_type = (Float, Int)\n"
      "check_types = true\n");
  apply_config(ok, c);
  CHECK(c.problem == "count-odds");
  CHECK(c.fixed == PatternKind::Cata);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 5, 8});
  CHECK(c.cfg.pop_size == 500);
  CHECK(c.cfg.max_evals == 75000);
  CHECK(c.cfg.crossover_rate == 0.25);
  CHECK(c.n_train == 100);
  CHECK(c.unbound == P(F(), I()));
  CHECK(c.cfg.check_types);
  CHECK_NOTHROW(c.validate());

  std::stringstream unknown("popsize = 5\n");
  CHECK_THROWS_AS(apply_config(unknown, c), ConfigError);
  std::stringstream bad_value("pop_size = many\n");
  CHECK_THROWS_AS(apply_config(bad_value, c), ConfigError);
  std::stringstream bad_pattern("pattern = para\n");
  CHECK_THROWS_AS(apply_config(bad_pattern, c), ConfigError);
}

TEST_CASE("campaign validation") {
  Campaign c;
  c.problem = "median";
  CHECK(c.seeds.size() == 30);
  CHECK_NOTHROW(c.validate());
  c.seeds = {1, 1};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.seeds = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.seeds = {0};
  c.problem = "no-such-problem";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.problem = "median";
  c.cfg.crossover_rate = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("champion files round-trip") {
  Champion ch;
  ch.problem = "vector-average";
  ch.pattern = PatternKind::Accu;
  ch.unbound = P(F(), I());
  ch.seed = 4;
  ch.n_train = 50;
  ch.program = "f arg0 = ...\n";
  Champion back = parse_champion(champion_file_text(ch));
  CHECK(back.problem == ch.problem);
  CHECK(back.pattern == ch.pattern);
  CHECK(back.unbound == ch.unbound);
  CHECK(back.seed == 4);
  CHECK(back.n_train == 50);
  CHECK_FALSE(back.n_test);
  CHECK(back.program == ch.program);
  CHECK_THROWS_AS(parse_champion("f arg0 = 0\n"), ConfigError);
  CHECK(champion_file_name(rec("grade", PatternKind::Cata, 12, true)) == "grade-cata-12.txt");
}

TEST_CASE("escalation skips inapplicable patterns and keeps going while nothing succeeds") {
  // A budget of two generations of 20 cannot solve number-io.
  Campaign c = tiny("number-io", 2);
  auto recs = escalate(c);
  std::vector<PatternKind> kinds;
  for (const RunRecord& r : recs) {
    CHECK_FALSE(r.success);
    if (kinds.empty() || kinds.back() != r.pattern) kinds.push_back(r.pattern);
  }
  CHECK(kinds == std::vector<PatternKind>{PatternKind::NoScheme, PatternKind::Hylo});
  CHECK(recs.size() == 4);
}

TEST_CASE("escalation stops at the first pattern with a success") {
  // smallest is solved by NoScheme on some seed within this budget.
  Campaign c = tiny("smallest", 3);
  c.cfg.pop_size = 200;
  c.cfg.max_evals = 20'000;
  c.n_train = 20;
  c.n_test = 50;
  auto recs = escalate(c);
  const bool any = std::any_of(recs.begin(), recs.end(), [](const RunRecord& r) { return r.success; });
  REQUIRE(any);
  for (const RunRecord& r : recs) CHECK(r.pattern == PatternKind::NoScheme);
  CHECK(recs.size() == 3);
}

TEST_CASE("a fixed inapplicable pattern is a configuration error") {
  Campaign c = tiny("number-io", 1);
  c.fixed = PatternKind::Cata;
  CHECK_THROWS_AS(escalate(c), ConfigError);
}

TEST_CASE("records satisfy the success and budget invariants") {
  Campaign c = tiny("count-odds", 3);
  c.fixed = PatternKind::Cata;
  c.cfg.pop_size = 50;
  c.cfg.max_evals = 500;
  for (const RunRecord& r : escalate(c)) {
    CHECK(r.evals_used <= c.cfg.max_evals);
    if (r.success) {
      CHECK(r.train_fitness == 0);
      CHECK(r.test_errors == 0);
    }
    if (r.stopped_early) CHECK(r.train_fitness == 0);
    CHECK_FALSE(r.champion_text.empty());
  }
}

TEST_CASE("campaigns resume and champions re-score") {
  Campaign c = tiny("sum-of-squares", 3);
  c.fixed = PatternKind::Hylo;
  c.output_path = scratch("records.jsonl").string();
  c.champions_dir = scratch("champions").string();
  int fresh = 0;
  auto first = run_campaign(c, [&](const RunRecord&) { ++fresh; });
  CHECK(fresh == 3);
  CHECK(first.size() == 3);
  CHECK(read_records_file(c.output_path).size() == 3);

  fresh = 0;
  auto again = run_campaign(c, [&](const RunRecord&) { ++fresh; });
  CHECK(fresh == 0);
  CHECK(again.size() == 3);
  CHECK(read_records_file(c.output_path).size() == 3);

  c.seeds = Campaign::default_seeds(4);
  run_campaign(c, [&](const RunRecord&) { ++fresh; });
  CHECK(fresh == 1);
  CHECK(read_records_file(c.output_path).size() == 4);

  for (const RunRecord& r : read_records_file(c.output_path)) {
    std::ifstream in(fs::path(c.champions_dir) / champion_file_name(r));
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    Champion ch = parse_champion(ss.str());
    CHECK(ch.unbound == I());
    EvalReport rep = evaluate_champion(ch);
    CHECK(rep.train_fitness == r.train_fitness);
    CHECK(static_cast<std::int64_t>(rep.test_errors) == r.test_errors);
    CHECK(rep.train_cases == 10);
  }
}

TEST_CASE("an oracle-equivalent champion reports no test errors") {
  Champion ch;
  ch.problem = "sum-of-squares";
  ch.pattern = PatternKind::Hylo;
  ch.seed = 2;
  ch.program =
      "f arg0 = hylo alg coalg arg0 where\n"
      "  coalg seed = if eq seed 0 then [] else multInt seed seed : predInt seed\n"
      "  alg [] = 0\n"
      "  alg (x : acc) = addInt x acc\n";
  EvalReport r = evaluate_champion(ch);
  CHECK(r.train_fitness == 0);
  CHECK(r.test_errors == 0);
  CHECK(r.test_cases == static_cast<std::size_t>(find_problem("sum-of-squares")->n_test));
}
