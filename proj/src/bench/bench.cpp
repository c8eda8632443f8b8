#include "hybridmc/bench/bench.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include <boost/algorithm/string.hpp>

#include "hybridmc/errors.hpp"
#include "hybridmc/ltl/translate.hpp"
#include "hybridmc/products/plain.hpp"

namespace hmc {

// ---------------------------------------------------------------------------
// Formula generation

const char *to_string(FormulaKind k) {
  switch (k) {
  case FormulaKind::Random:
    return "random";
  case FormulaKind::Fairness:
    return "fairness";
  case FormulaKind::RandomWithX:
    return "random-with-X";
  }
  return "?";
}

FormulaKind parse_formula_kind(std::string_view text) {
  if (text == "random")
    return FormulaKind::Random;
  if (text == "fairness")
    return FormulaKind::Fairness;
  if (text == "random-with-X" || text == "random-with-x")
    return FormulaKind::RandomWithX;
  throw UsageError("unknown formula kind '" + std::string(text) +
                   "' (expected random, fairness or random-with-X)");
}

namespace {

ltl::Formula gen(std::mt19937_64 &rng, const FormulaSpec &spec, int depth, bool allow_x) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (depth <= 0 || coin(rng) < spec.p_leaf) {
    std::uniform_int_distribution<std::size_t> pick(0, spec.props.size() - 1);
    return ltl::prop(spec.props[pick(rng)]);
  }
  if (coin(rng) < spec.p_unary) {
    std::uniform_int_distribution<int> op(0, allow_x ? 3 : 2);
    ltl::Formula sub = gen(rng, spec, depth - 1, allow_x);
    switch (op(rng)) {
    case 0:
      return ltl::lnot(sub);
    case 1:
      return ltl::finally(sub);
    case 2:
      return ltl::globally(sub);
    default:
      return ltl::next(sub);
    }
  }
  std::uniform_int_distribution<int> op(0, 4);
  int k = op(rng);
  ltl::Formula l = gen(rng, spec, depth - 1, allow_x);
  ltl::Formula r = gen(rng, spec, depth - 1, allow_x);
  switch (k) {
  case 0:
    return ltl::land(l, r);
  case 1:
    return ltl::lor(l, r);
  case 2:
    return ltl::implies(l, r);
  case 3:
    return ltl::until(l, r);
  default:
    return ltl::release(l, r);
  }
}

} // namespace

ltl::Formula random_formula(std::mt19937_64 &rng, const FormulaSpec &spec) {
  if (spec.props.empty())
    throw UsageError("formula generation needs at least one proposition");
  if (spec.depth < 0)
    throw UsageError("formula depth must be nonnegative");
  switch (spec.kind) {
  case FormulaKind::Random:
    return gen(rng, spec, spec.depth, false);
  case FormulaKind::RandomWithX: {
    for (int attempt = 0; attempt < 64; ++attempt) {
      ltl::Formula f = gen(rng, spec, spec.depth, true);
      if (ltl::contains_next(f))
        return f;
    }
    return ltl::next(gen(rng, spec, std::max(spec.depth - 1, 0), true));
  }
  case FormulaKind::Fairness: {
    if (spec.fairness_terms < 1)
      throw UsageError("fairness formulas need at least one fairness term");
    std::uniform_int_distribution<std::size_t> pick(0, spec.props.size() - 1);
    ltl::Formula premise;
    for (int i = 0; i < spec.fairness_terms; ++i) {
      ltl::Formula term = ltl::globally(ltl::finally(ltl::prop(spec.props[pick(rng)])));
      premise = premise ? ltl::land(premise, term) : term;
    }
    return ltl::implies(premise, gen(rng, spec, spec.depth, false));
  }
  }
  throw UsageError("bad formula kind");
}

std::vector<ltl::Formula> gen_formulas(const FormulaSpec &spec, int n) {
  if (n < 1)
    throw UsageError("number of formulas must be at least 1");
  std::mt19937_64 rng(spec.seed);
  std::vector<ltl::Formula> out;
  for (int i = 0; i < n; ++i)
    out.push_back(random_formula(rng, spec));
  return out;
}

std::vector<ltl::Formula> gen_filtered_formulas(const FormulaSpec &spec0, int n,
                                                const ModelSource &model,
                                                const FilterOptions &opt) {
  if (n < 1)
    throw UsageError("number of formulas must be at least 1");
  LoadedModel m = load_model(model);
  FormulaSpec spec = spec0;
  if (spec.props.empty())
    for (PropId p : m.model->defined_props())
      spec.props.push_back(m.ap->name(p));

  const int limit = std::max(static_cast<int>(std::ceil(n / 2.0)),
                             static_cast<int>(std::floor(n * (0.5 + opt.balance) + 1e-9)));
  int count[2] = {0, 0};
  std::vector<ltl::Formula> out;
  std::unordered_set<std::string> seen;
  std::mt19937_64 rng(spec.seed);
  int attempts = 0;
  while (static_cast<int>(out.size()) < n) {
    if (attempts++ >= opt.max_attempts)
      throw ResourceError("formula filter exhausted: " + std::to_string(out.size()) + " of " +
                          std::to_string(n) + " formulas qualified after " +
                          std::to_string(opt.max_attempts) + " attempts");
    ltl::Formula f = random_formula(rng, spec);
    if (!seen.insert(ltl::to_string(f)).second)
      continue;
    DdManager &mgr = *m.mgr;
    mgr.set_deadline(std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(opt.timeout_s)));
    try {
      Tgba a = ltl::translate(f, *m.ap);
      ModelStates view(*m.model);
      PlainProduct prod(a, view);
      ExpansionStats st = explore_all(prod);
      if (st.states_created < opt.min_states) {
        mgr.set_deadline(std::nullopt);
        continue;
      }
      int v = check_emptiness(prod).verdict == Verdict::NonEmpty ? 1 : 0;
      if (count[v] < limit) {
        ++count[v];
        out.push_back(f);
      }
    } catch (const ResourceError &) {
      // too big to size within budget: not a usable candidate
    }
    mgr.set_deadline(std::nullopt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_header() {
  return "model,formula-id,method,verdict,states,edges,peak-nodes,time-ms,status";
}

std::string to_csv(const ExperimentRecord &r) {
  char t[64];
  std::snprintf(t, sizeof t, "%.3f", r.time_ms);
  std::ostringstream os;
  os << r.model << ',' << r.formula_id << ',' << r.method << ',' << r.verdict << ',' << r.states
     << ',' << r.edges << ',' << r.peak_nodes << ',' << t << ',' << r.status;
  return os.str();
}

std::vector<ExperimentRecord> parse_csv(std::string_view text) {
  std::vector<std::string> lines;
  boost::split(lines, text, boost::is_any_of("\n"));
  std::vector<ExperimentRecord> out;
  bool header = true;
  std::size_t lineno = 0;
  for (std::string line : lines) {
    ++lineno;
    boost::trim(line);
    if (line.empty())
      continue;
    if (header) {
      if (line != csv_header())
        throw ParseError("unexpected CSV header", lineno);
      header = false;
      continue;
    }
    std::vector<std::string> f;
    boost::split(f, line, boost::is_any_of(","));
    if (f.size() != 9)
      throw ParseError("expected 9 CSV fields, got " + std::to_string(f.size()), lineno);
    ExperimentRecord r;
    try {
      r.model = f[0];
      r.formula_id = f[1];
      r.method = f[2];
      r.verdict = f[3];
      r.states = std::stoull(f[4]);
      r.edges = std::stoull(f[5]);
      r.peak_nodes = std::stoull(f[6]);
      r.time_ms = std::stod(f[7]);
      r.status = f[8];
    } catch (const std::exception &) {
      throw ParseError("bad number in CSV row", lineno);
    }
    out.push_back(std::move(r));
  }
  if (header)
    throw ParseError("missing CSV header", 1);
  return out;
}

// ---------------------------------------------------------------------------
// Run matrix

namespace {

struct Task {
  const ModelWorkload *work;
  std::size_t formula;
  Method method;
};

ExperimentRecord base_record(const Task &t) {
  ExperimentRecord r;
  r.model = t.work->model.label();
  r.formula_id = "f" + std::to_string(t.formula);
  r.method = to_string(t.method);
  return r;
}

ExperimentRecord run_task(const Task &t, const MatrixOptions &opt) {
  ExperimentRecord r = base_record(t);
  try {
    CheckOptions co;
    co.method = t.method;
    co.timeout_s = opt.timeout_s;
    co.node_limit = opt.node_limit;
    co.keep_lasso = false;
    CheckReport rep = run_check(t.work->formulas[t.formula], t.work->model, co);
    r.status = to_string(rep.status);
    if (rep.status == RunStatus::Ok)
      r.verdict = to_string(rep.verdict);
    r.states = rep.states;
    r.edges = rep.edges;
    r.peak_nodes = rep.peak_nodes;
    r.time_ms = rep.time_ms;
  } catch (const std::exception &) {
    r.status = "error";
  }
  return r;
}

/// Runs each task in a child process, at most `jobs` at a time.
std::vector<ExperimentRecord> run_forked(const std::vector<Task> &tasks, const MatrixOptions &opt) {
  std::vector<ExperimentRecord> out(tasks.size());
  struct Child {
    std::size_t task;
    int fd;
  };
  std::map<pid_t, Child> active;
  std::size_t next = 0;
  const unsigned hard_limit = static_cast<unsigned>(std::ceil(opt.timeout_s * 2)) + 10;

  auto collect = [&]() {
    int status = 0;
    pid_t pid = waitpid(-1, &status, 0);
    if (pid < 0)
      throw std::runtime_error("waitpid failed");
    auto it = active.find(pid);
    if (it == active.end())
      return;
    std::string data;
    char buf[4096];
    ssize_t k;
    while ((k = read(it->second.fd, buf, sizeof buf)) > 0)
      data.append(buf, static_cast<std::size_t>(k));
    close(it->second.fd);
    const Task &t = tasks[it->second.task];
    ExperimentRecord r = base_record(t);
    bool parsed = false;
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0 && !data.empty()) {
      try {
        auto recs = parse_csv(csv_header() + "\n" + data);
        if (recs.size() == 1) {
          r = recs.front();
          parsed = true;
        }
      } catch (const ParseError &) {
      }
    }
    if (!parsed) {
      r.status = (WIFSIGNALED(status) && WTERMSIG(status) == SIGALRM) ? "timeout" : "error";
      r.time_ms = WIFSIGNALED(status) && WTERMSIG(status) == SIGALRM ? hard_limit * 1000.0 : 0;
    }
    out[it->second.task] = r;
    active.erase(it);
  };

  while (next < tasks.size() || !active.empty()) {
    if (next < tasks.size() && static_cast<int>(active.size()) < std::max(opt.jobs, 1)) {
      int fds[2];
      if (pipe(fds) != 0)
        throw std::runtime_error("pipe failed");
      std::fflush(nullptr);
      pid_t pid = fork();
      if (pid < 0)
        throw std::runtime_error("fork failed");
      if (pid == 0) {
        close(fds[0]);
        alarm(hard_limit);
        std::string line = to_csv(run_task(tasks[next], opt)) + "\n";
        const char *p = line.data();
        std::size_t left = line.size();
        while (left > 0) {
          ssize_t w = write(fds[1], p, left);
          if (w <= 0)
            break;
          p += w;
          left -= static_cast<std::size_t>(w);
        }
        close(fds[1]);
        _exit(0);
      }
      close(fds[1]);
      active.emplace(pid, Child{next, fds[0]});
      ++next;
      continue;
    }
    collect();
  }
  return out;
}

std::map<ExperimentKey, std::vector<const ExperimentRecord *>>
group(const std::vector<ExperimentRecord> &records, std::vector<ExperimentKey> *order = nullptr) {
  std::map<ExperimentKey, std::vector<const ExperimentRecord *>> g;
  for (const auto &r : records) {
    ExperimentKey k{r.model, r.formula_id};
    auto [it, fresh] = g.try_emplace(k);
    if (fresh && order)
      order->push_back(k);
    it->second.push_back(&r);
  }
  return g;
}

} // namespace

MatrixResult run_matrix(const std::vector<ModelWorkload> &work, const MatrixOptions &opt) {
  std::vector<Task> tasks;
  for (const auto &w : work)
    for (std::size_t i = 0; i < w.formulas.size(); ++i)
      for (Method m : opt.methods) {
        if (needs_stutter_invariance(m) && ltl::contains_next(w.formulas[i]))
          continue; // method does not apply to this formula
        tasks.push_back({&w, i, m});
      }
  MatrixResult res;
  if (opt.jobs <= 0) {
    for (const Task &t : tasks)
      res.records.push_back(run_task(t, opt));
  } else {
    res.records = run_forked(tasks, opt);
  }
  res.trivial = find_trivial(res.records, opt.trivial_ms);
  res.alarms = find_alarms(res.records);
  return res;
}

std::set<ExperimentKey> find_alarms(const std::vector<ExperimentRecord> &records) {
  std::set<ExperimentKey> out;
  for (auto &[k, rs] : group(records)) {
    std::set<std::string> verdicts;
    for (const auto *r : rs)
      if (r->status == "ok")
        verdicts.insert(r->verdict);
    if (verdicts.size() > 1)
      out.insert(k);
  }
  return out;
}

std::set<ExperimentKey> find_trivial(const std::vector<ExperimentRecord> &records,
                                     double trivial_ms) {
  std::set<ExperimentKey> out;
  for (auto &[k, rs] : group(records)) {
    bool trivial = true;
    for (const auto *r : rs)
      if (r->status != "ok" || r->time_ms >= trivial_ms)
        trivial = false;
    if (trivial)
      out.insert(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cumulative distribution and tallies

CdfSummary cdf_summary(const std::vector<ExperimentRecord> &records,
                       const std::set<ExperimentKey> &with_next) {
  CdfSummary s;
  std::map<std::string, std::size_t> series_index;
  auto series = [&](const std::string &m) -> CdfSeries & {
    auto [it, fresh] = series_index.try_emplace(m, s.series.size());
    if (fresh)
      s.series.push_back({m, {}});
    return s.series[it->second];
  };
  for (const auto &r : records)
    (void)series(r.method);

  std::vector<ExperimentKey> order;
  auto groups = group(records, &order);
  for (const auto &k : order) {
    const auto &rs = groups[k];
    double worst = -1, best = -1;
    std::string verdict;
    for (const auto *r : rs) {
      if (r->status != "ok")
        continue;
      if (verdict.empty())
        verdict = r->verdict;
      worst = std::max(worst, r->time_ms);
      best = best < 0 ? r->time_ms : std::min(best, r->time_ms);
    }
    if (worst < 0)
      continue; // nothing completed
    TallyGroup g{verdict == "non-empty", with_next.count(k) > 0};
    auto &tally = s.tallies[g];
    for (const auto *r : rs) {
      Tally &t = tally[r->method];
      if (r->status != "ok") {
        series(r->method).points.push_back(120.0);
        ++t.fail;
        continue;
      }
      series(r->method).points.push_back(worst > 0 ? 100.0 * r->time_ms / worst : 100.0);
      if (r->time_ms <= best)
        ++t.win;
      else
        ++t.lose;
    }
  }
  for (auto &se : s.series)
    std::sort(se.points.begin(), se.points.end());
  return s;
}

std::string cdf_csv(const CdfSummary &s) {
  std::ostringstream os;
  os << "method,percentage,cumulative\n";
  char buf[32];
  for (const auto &se : s.series)
    for (std::size_t i = 0; i < se.points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.2f", se.points[i]);
      os << se.method << ',' << buf << ',' << (i + 1) << '\n';
    }
  return os.str();
}

std::string tally_table(const CdfSummary &s) {
  std::vector<TallyGroup> groups;
  for (auto &[g, _] : s.tallies)
    groups.push_back(g);
  std::ostringstream os;
  os << "method";
  for (const auto &g : groups)
    os << '\t' << (g.non_empty ? "non-empty" : "empty") << (g.has_next ? "/X" : "/no-X")
       << " W/L/F";
  os << '\n';
  for (const auto &se : s.series) {
    os << se.method;
    for (const auto &g : groups) {
      const auto &row = s.tallies.at(g);
      auto it = row.find(se.method);
      Tally t = it == row.end() ? Tally{} : it->second;
      os << '\t' << t.win << '/' << t.lose << '/' << t.fail;
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::vector<std::string> split_list(std::string v) {
  boost::trim(v);
  if (!v.empty() && v.front() == '[' && v.back() == ']')
    v = v.substr(1, v.size() - 2);
  std::vector<std::string> parts, out;
  boost::split(parts, v, boost::is_any_of(","));
  for (auto &p : parts) {
    boost::trim(p);
    boost::trim_if(p, boost::is_any_of("\""));
    if (!p.empty())
      out.push_back(p);
  }
  return out;
}

} // namespace

BenchConfig parse_bench_config(std::string_view text) {
  BenchConfig c;
  c.methods = all_methods();
  std::vector<std::string> lines;
  boost::split(lines, text, boost::is_any_of("\n"));
  std::size_t lineno = 0;
  for (std::string line : lines) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    boost::trim(line);
    if (line.empty() || line.front() == '[')
      continue; // blank, comment or section header
    auto eq = line.find('=');
    auto where = " on line " + std::to_string(lineno);
    if (eq == std::string::npos)
      throw UsageError("expected 'key = value'" + where);
    std::string key = boost::trim_copy(line.substr(0, eq));
    std::string value = boost::trim_copy(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    boost::replace_all(key, "_", "-");
    try {
      if (key == "models") {
        c.models.clear();
        for (auto &m : split_list(value))
          c.models.push_back(parse_model_source(m));
      } else if (key == "methods") {
        c.methods.clear();
        for (auto &m : split_list(value)) {
          if (m == "all") {
            c.methods = all_methods();
            break;
          }
          c.methods.push_back(parse_method(m));
        }
      } else if (key == "kind") {
        c.formulas.kind = parse_formula_kind(value);
      } else if (key == "props") {
        c.formulas.props = split_list(value);
      } else if (key == "depth") {
        c.formulas.depth = std::stoi(value);
      } else if (key == "fairness-terms") {
        c.formulas.fairness_terms = std::stoi(value);
      } else if (key == "p-leaf") {
        c.formulas.p_leaf = std::stod(value);
      } else if (key == "p-unary") {
        c.formulas.p_unary = std::stod(value);
      } else if (key == "seed") {
        c.formulas.seed = std::stoull(value);
      } else if (key == "count" || key == "formulas") {
        c.count = std::stoi(value);
      } else if (key == "min-states") {
        c.filter.min_states = std::stoull(value);
      } else if (key == "balance") {
        c.filter.balance = std::stod(value);
      } else if (key == "attempts") {
        c.filter.max_attempts = std::stoi(value);
      } else if (key == "timeout") {
        c.matrix.timeout_s = std::stod(value);
        c.filter.timeout_s = c.matrix.timeout_s;
      } else if (key == "node-limit") {
        c.matrix.node_limit = std::stoull(value);
      } else if (key == "jobs") {
        c.matrix.jobs = std::stoi(value);
      } else if (key == "trivial-ms") {
        c.matrix.trivial_ms = std::stod(value);
      } else if (key == "keep-trivial") {
        c.keep_trivial = value == "true" || value == "yes" || value == "1";
      } else {
        throw UsageError("unknown key '" + key + "'" + where);
      }
    } catch (const std::invalid_argument &e) {
      if (dynamic_cast<const UsageError *>(&e))
        throw;
      throw UsageError("bad value for '" + key + "'" + where);
    } catch (const std::out_of_range &) {
      throw UsageError("value out of range for '" + key + "'" + where);
    }
  }
  if (c.models.empty())
    throw UsageError("bench configuration lists no models");
  if (c.methods.empty())
    throw UsageError("bench configuration lists no methods");
  c.matrix.methods = c.methods;
  return c;
}

} // namespace hmc
