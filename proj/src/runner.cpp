#include "origami/runner.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "origami/syntax.hpp"

namespace origami {

using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last) throw ConfigError("invalid value for " + key + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid value for " + key + ": '" + text + "'");
}

PatternKind pattern_or_throw(std::string_view name) {
  auto k = parse_pattern(name);
  if (!k) throw ConfigError("unknown pattern '" + std::string(name) + "'");
  return *k;
}

std::string_view display_name(PatternKind k) {
  switch (k) {
    case PatternKind::NoScheme: return "NoScheme";
    case PatternKind::Cata: return "Cata";
    case PatternKind::CurriedCata: return "CurriedCata";
    case PatternKind::Ana: return "Ana";
    case PatternKind::Accu: return "Accu";
    case PatternKind::Hylo: return "Hylo";
  }
  return "?";
}

const Problem& problem_or_throw(const std::string& name) {
  const Problem* p = find_problem(name);
  if (p) return *p;
  std::string valid;
  for (const std::string& n : problem_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown problem '" + name + "' (valid: " + valid + ")");
}

}  // namespace

std::vector<std::uint64_t> Campaign::default_seeds(int n) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < n; ++i) s.push_back(static_cast<std::uint64_t>(i));
  return s;
}

void Campaign::validate() const {
  problem_or_throw(problem);
  if (seeds.empty()) throw ConfigError("campaign needs at least one seed");
  std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
  if (distinct.size() != seeds.size()) throw ConfigError("campaign seeds must be distinct");
  if (n_train && *n_train < 1) throw ConfigError("train size must be positive");
  if (n_test && *n_test < 1) throw ConfigError("test size must be positive");
  if (jobs < 1) throw ConfigError("jobs must be positive");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Records

std::string to_json_line(const RunRecord& r) {
  json j = {{"problem", r.problem},
            {"pattern", std::string(pattern_name(r.pattern))},
            {"seed", r.seed},
            {"success", r.success},
            {"evalsUsed", r.evals_used},
            {"generations", r.generations},
            {"wallTimeSeconds", r.wall_time_seconds},
            {"championText", r.champion_text},
            {"trainFitness", r.train_fitness},
            {"testErrors", r.test_errors},
            {"stoppedEarly", r.stopped_early}};
  return j.dump();
}

RunRecord parse_record(const std::string& line) {
  json j = json::parse(line);
  RunRecord r;
  r.problem = j.at("problem").get<std::string>();
  r.pattern = pattern_or_throw(j.at("pattern").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.success = j.at("success").get<bool>();
  r.evals_used = j.at("evalsUsed").get<std::int64_t>();
  r.generations = j.at("generations").get<int>();
  r.wall_time_seconds = j.at("wallTimeSeconds").get<double>();
  r.champion_text = j.at("championText").get<std::string>();
  r.train_fitness = j.at("trainFitness").get<double>();
  r.test_errors = j.at("testErrors").get<std::int64_t>();
  r.stopped_early = j.value("stoppedEarly", false);
  return r;
}

std::vector<RunRecord> read_records(std::istream& is) {
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(is, line))
    if (!trim(line).empty()) out.push_back(parse_record(line));
  return out;
}

std::vector<RunRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  return read_records(in);
}

void append_record(const std::string& path, const RunRecord& r) {
  const std::string line = to_json_line(r) + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + path);
  ::flock(fd, LOCK_EX);
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::write(fd, line.data() + off, line.size() - off);
    if (n <= 0) {
      ::flock(fd, LOCK_UN);
      ::close(fd);
      throw std::runtime_error("write failed on " + path);
    }
    off += static_cast<std::size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

// ---------------------------------------------------------------------------
// Running

PatternInstance instance_for(const Problem& p, PatternKind k, std::optional<SemType> unbound) {
  std::optional<SemType> a;
  if (needs_unbound(k)) a = unbound ? *unbound : p.unbound_for(k);
  return instantiate(k, p.sig, a);
}

RunRecord run_seed(const Problem& p, PatternKind k, std::uint64_t seed, const Campaign& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset d = materialize(p, seed, c.n_train, c.n_test);
  const PatternInstance inst = instance_for(p, k, c.unbound);
  Generator gen(inst, p.env, p.pool);
  GpConfig cfg = c.cfg;
  cfg.seed = seed;
  FitnessFn fit = [&](const Individual& ind) { return fitness(ind.slots, inst, d.train, p.metric); };
  const RunResult res = run(gen, fit, cfg);

  RunRecord r;
  r.problem = p.name;
  r.pattern = k;
  r.seed = seed;
  r.evals_used = res.evals_used;
  r.generations = res.generations;
  r.champion_text = render_program(inst, res.champion.slots);
  r.train_fitness = res.champion.fitness;
  r.test_errors = static_cast<std::int64_t>(test_errors(res.champion.slots, inst, d.test, p.metric));
  r.success = r.train_fitness == 0 && r.test_errors == 0;
  r.stopped_early = res.stopped_early;
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<RunRecord> run_pattern(const Problem& p, PatternKind k, const Campaign& c,
                                   const std::vector<RunRecord>& done, const RecordSink& sink) {
  std::map<std::uint64_t, RunRecord> have;
  for (const RunRecord& r : done)
    if (r.problem == p.name && r.pattern == k) have.emplace(r.seed, r);

  std::vector<std::uint64_t> todo;
  for (std::uint64_t s : c.seeds)
    if (!have.count(s)) todo.push_back(s);

  std::vector<std::optional<RunRecord>> fresh(todo.size());
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      try {
        RunRecord r = run_seed(p, k, todo[i], c);
        std::lock_guard<std::mutex> lock(mu);
        if (sink) sink(r);
        fresh[i] = std::move(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = todo.size();
      }
    }
  };
  const int n_threads = std::min<int>(c.jobs, static_cast<int>(todo.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < todo.size(); ++i) have.emplace(todo[i], std::move(*fresh[i]));
  std::vector<RunRecord> out;
  for (std::uint64_t s : c.seeds) out.push_back(have.at(s));
  return out;
}

std::vector<RunRecord> escalate(const Campaign& c, const std::vector<RunRecord>& done, const RecordSink& sink) {
  c.validate();
  const Problem& p = problem_or_throw(c.problem);
  if (c.fixed && !applicable(*c.fixed, p.sig))
    throw ConfigError("pattern " + std::string(pattern_name(*c.fixed)) + " is not applicable to " + p.name +
                      " (" + p.sig.str() + ")");
  std::vector<RunRecord> out;
  for (PatternKind k : kAllPatterns) {
    if (c.fixed && k != *c.fixed) continue;
    if (!applicable(k, p.sig)) continue;
    std::vector<RunRecord> recs = run_pattern(p, k, c, done, sink);
    const bool solved = std::any_of(recs.begin(), recs.end(), [](const RunRecord& r) { return r.success; });
    out.insert(out.end(), recs.begin(), recs.end());
    if (solved) break;
  }
  return out;
}

std::string champion_file_name(const RunRecord& r) {
  return r.problem + "-" + std::string(pattern_name(r.pattern)) + "-" + std::to_string(r.seed) + ".txt";
}

std::vector<RunRecord> run_campaign(const Campaign& c, const RecordSink& on_record) {
  c.validate();
  std::vector<RunRecord> done;
  if (!c.output_path.empty()) done = read_records_file(c.output_path);
  if (!c.champions_dir.empty()) std::filesystem::create_directories(c.champions_dir);
  const Problem& p = problem_or_throw(c.problem);

  RecordSink sink = [&](const RunRecord& r) {
    if (!c.output_path.empty()) append_record(c.output_path, r);
    if (!c.champions_dir.empty()) {
      Champion ch;
      ch.problem = r.problem;
      ch.pattern = r.pattern;
      if (needs_unbound(r.pattern)) ch.unbound = c.unbound ? *c.unbound : p.unbound_for(r.pattern);
      ch.seed = r.seed;
      ch.n_train = c.n_train;
      ch.n_test = c.n_test;
      ch.program = r.champion_text;
      std::ofstream f(std::filesystem::path(c.champions_dir) / champion_file_name(r));
      f << champion_file_text(ch);
    }
    if (on_record) on_record(r);
  };
  return escalate(c, done, sink);
}

// ---------------------------------------------------------------------------
// Reporting

std::vector<ReportRow> report(const std::vector<RunRecord>& records) {
  // (problem, pattern, seed) -> success; duplicates count as solved if any copy is.
  std::map<std::tuple<std::string, PatternKind, std::uint64_t>, bool> runs;
  for (const RunRecord& r : records) {
    bool& s = runs[{r.problem, r.pattern, r.seed}];
    s = s || r.success;
  }
  std::map<std::string, std::map<PatternKind, std::pair<int, int>>> tally;  // successes, seeds
  for (const auto& [key, ok] : runs) {
    auto& t = tally[std::get<0>(key)][std::get<1>(key)];
    t.first += ok ? 1 : 0;
    t.second += 1;
  }
  std::vector<ReportRow> rows;
  for (const auto& [problem, per] : tally) {
    ReportRow row;
    row.problem = problem;
    row.percent.assign(kAllPatterns.size(), std::nullopt);
    for (const auto& [k, t] : per) {
      const int pct = static_cast<int>(std::lround(100.0 * t.first / t.second));
      row.percent[static_cast<std::size_t>(pattern_rank(k) - 1)] = pct;
      row.best = std::max(row.best, pct);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string cell(const std::optional<int>& v) { return v ? std::to_string(*v) : "--"; }

}  // namespace

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "Dataset";
  for (PatternKind k : kAllPatterns) os << ',' << display_name(k);
  os << ",Best\n";
  for (const ReportRow& r : rows) {
    os << r.problem;
    for (const auto& v : r.percent) os << ',' << cell(v);
    os << ',' << r.best << '\n';
  }
  return os.str();
}

std::string report_markdown(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "| Dataset |";
  for (PatternKind k : kAllPatterns) os << ' ' << display_name(k) << " |";
  os << " Best |\n|:--|";
  for (std::size_t i = 0; i < kAllPatterns.size(); ++i) os << "--:|";
  os << "--:|\n";
  for (const ReportRow& r : rows) {
    os << "| " << r.problem << " |";
    for (const auto& v : r.percent) os << ' ' << cell(v) << " |";
    os << ' ' << r.best << " |\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Config files

void apply_config(std::istream& is, Campaign& c) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    if (key == "problem") {
      c.problem = val;
    } else if (key == "pattern") {
      if (val == "auto") c.fixed.reset();
      else c.fixed = pattern_or_throw(val);
    } else if (key == "seeds") {
      c.seeds = Campaign::default_seeds(parse_number<int>(key, val));
    } else if (key == "seed_list") {
      c.seeds.clear();
      std::stringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) c.seeds.push_back(parse_number<std::uint64_t>(key, trim(item)));
    } else if (key == "pop_size") {
      c.cfg.pop_size = parse_number<int>(key, val);
    } else if (key == "tournament_k") {
      c.cfg.tournament_k = parse_number<int>(key, val);
    } else if (key == "crossover_rate") {
      c.cfg.crossover_rate = parse_number<double>(key, val);
    } else if (key == "max_depth") {
      c.cfg.max_depth = parse_number<int>(key, val);
    } else if (key == "ramp_min") {
      c.cfg.ramp_min = parse_number<int>(key, val);
    } else if (key == "ramp_max") {
      c.cfg.ramp_max = parse_number<int>(key, val);
    } else if (key == "max_evals") {
      c.cfg.max_evals = parse_number<std::int64_t>(key, val);
    } else if (key == "check_types") {
      c.cfg.check_types = parse_bool(key, val);
    } else if (key == "train") {
      c.n_train = parse_number<int>(key, val);
    } else if (key == "test") {
      c.n_test = parse_number<int>(key, val);
    } else if (key == "unbound_type") {
      try {
        c.unbound = parse_type(val);
      } catch (const std::exception& e) {
        throw ConfigError("invalid unbound_type: " + std::string(e.what()));
      }
    } else if (key == "out") {
      c.output_path = val;
    } else if (key == "champions") {
      c.champions_dir = val;
    } else if (key == "jobs") {
      c.jobs = parse_number<int>(key, val);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
}

void apply_config_file(const std::string& path, Campaign& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  apply_config(in, c);
}

// ---------------------------------------------------------------------------
// Champion files

std::string champion_file_text(const Champion& ch) {
  std::ostringstream os;
  os << "-- problem: " << ch.problem << '\n' << "-- pattern: " << pattern_name(ch.pattern) << '\n';
  if (ch.unbound) os << "-- unbound: " << ch.unbound->str() << '\n';
  os << "-- seed: " << ch.seed << '\n';
  if (ch.n_train) os << "-- train: " << *ch.n_train << '\n';
  if (ch.n_test) os << "-- test: " << *ch.n_test << '\n';
  os << ch.program;
  if (ch.program.empty() || ch.program.back() != '\n') os << '\n';
  return os.str();
}

Champion parse_champion(std::string_view text) {
  Champion ch;
  bool have_problem = false, have_pattern = false;
  std::string program;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("--", 0) == 0) {
      const std::string body = trim(std::string_view(line).substr(2));
      const auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(std::string_view(body).substr(0, colon));
      const std::string val = trim(std::string_view(body).substr(colon + 1));
      if (key == "problem") {
        ch.problem = val;
        have_problem = true;
      } else if (key == "pattern") {
        ch.pattern = pattern_or_throw(val);
        have_pattern = true;
      } else if (key == "unbound") {
        ch.unbound = parse_type(val);
      } else if (key == "seed") {
        ch.seed = parse_number<std::uint64_t>(key, val);
      } else if (key == "train") {
        ch.n_train = parse_number<int>(key, val);
      } else if (key == "test") {
        ch.n_test = parse_number<int>(key, val);
      }
      continue;
    }
    program += line;
    program += '\n';
  }
  if (!have_problem || !have_pattern) throw ConfigError("champion file lacks '-- problem:' or '-- pattern:' header");
  ch.program = std::move(program);
  return ch;
}

EvalReport evaluate_champion(const Champion& ch, const std::optional<Dataset>& dataset) {
  const Problem& p = problem_or_throw(ch.problem);
  const PatternInstance inst = instance_for(p, ch.pattern, ch.unbound);
  const std::vector<Expr> slots = parse_program(inst, ch.program);
  const Dataset d = dataset ? *dataset : materialize(p, ch.seed, ch.n_train, ch.n_test);
  if (!(d.sig == p.sig)) throw ConfigError("dataset signature " + d.sig.str() + " does not match " + p.name);
  EvalReport r;
  r.train_fitness = fitness(slots, inst, d.train, p.metric);
  r.train_cases = d.train.size();
  r.test_errors = test_errors(slots, inst, d.test, p.metric);
  r.test_cases = d.test.size();
  return r;
}

}  // namespace origami
