#include "doctest.h"

#include <algorithm>

#include "hybridmc/bench/bench.hpp"
#include "hybridmc/errors.hpp"
#include "hybridmc/ltl/translate.hpp"

using namespace hmc;

namespace {

const std::string kRunningExample = HYBRIDMC_TEST_DATA "/running_example.ks";

ExperimentRecord rec(const std::string &fid, const std::string &method, double ms,
                     const std::string &verdict, const std::string &status = "ok") {
  ExperimentRecord r;
  r.model = "m";
  r.formula_id = fid;
  r.method = method;
  r.time_ms = ms;
  r.status = status;
  r.verdict = status == "ok" ? verdict : "";
  return r;
}

const CdfSeries &series_of(const CdfSummary &s, const std::string &m) {
  auto it = std::find_if(s.series.begin(), s.series.end(),
                         [&](const CdfSeries &c) { return c.method == m; });
  REQUIRE(it != s.series.end());
  return *it;
}

} // namespace

TEST_CASE("bench: generated formulas are reproducible and shaped by kind") {
  FormulaSpec spec;
  spec.props = {"a", "b", "c"};
  spec.seed = 42;
  auto one = gen_formulas(spec, 50);
  auto two = gen_formulas(spec, 50);
  REQUIRE(one.size() == 50);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(ltl::to_string(one[i]) == ltl::to_string(two[i]));
    CHECK(!ltl::contains_next(one[i]));
  }
  spec.seed = 43;
  auto other = gen_formulas(spec, 50);
  int same = 0;
  for (std::size_t i = 0; i < one.size(); ++i)
    same += ltl::to_string(one[i]) == ltl::to_string(other[i]);
  CHECK(same < 50);

  spec.kind = FormulaKind::RandomWithX;
  for (const auto &f : gen_formulas(spec, 100))
    CHECK(ltl::contains_next(f));

  spec.kind = FormulaKind::Fairness;
  spec.fairness_terms = 2;
  for (const auto &f : gen_formulas(spec, 30)) {
    REQUIRE(f->kind == ltl::Kind::Implies);
    const auto &premise = f->left;
    REQUIRE(premise->kind == ltl::Kind::And);
    for (const auto &term : {premise->left, premise->right}) {
      CHECK(term->kind == ltl::Kind::Globally);
      CHECK(term->left->kind == ltl::Kind::Finally);
    }
    CHECK(!ltl::contains_next(f));
  }

  spec.props.clear();
  CHECK_THROWS_AS(gen_formulas(spec, 1), UsageError);
  CHECK_THROWS_AS(parse_formula_kind("weird"), UsageError);
  CHECK(parse_formula_kind("random-with-X") == FormulaKind::RandomWithX);
}

TEST_CASE("bench: filtered generation balances verdicts") {
  FormulaSpec spec;
  spec.props = {"a", "b", "c"};
  spec.seed = 5;
  spec.depth = 3;
  FilterOptions opt;
  opt.min_states = 4;
  opt.balance = 0.10;
  auto fs = gen_filtered_formulas(spec, 10, parse_model_source(kRunningExample), opt);
  REQUIRE(fs.size() == 10);
  int nonempty = 0;
  for (const auto &f : fs) {
    CheckReport r = run_check(f, parse_model_source(kRunningExample), CheckOptions{});
    CHECK(r.states >= 4);
    nonempty += r.verdict == Verdict::NonEmpty;
  }
  // Each verdict class holds 50% +- 10% of the formulas.
  CHECK(nonempty >= 4);
  CHECK(nonempty <= 6);

  opt.min_states = 1000; // the example product never gets this large
  opt.max_attempts = 50;
  CHECK_THROWS_AS(gen_filtered_formulas(spec, 2, parse_model_source(kRunningExample), opt), ResourceError);
}

TEST_CASE("bench: CSV round trip") {
  std::vector<ExperimentRecord> rs = {rec("f0", "slap", 12.5, "non-empty"),
                                      rec("f1", "owcty", 30000, "", "timeout"),
                                      rec("f2", "sog", 0, "", "error")};
  rs[0].states = 17;
  rs[0].edges = 40;
  rs[0].peak_nodes = 1234;
  std::string text = csv_header() + "\n";
  for (const auto &r : rs)
    text += to_csv(r) + "\n";
  CHECK(csv_header() == "model,formula-id,method,verdict,states,edges,peak-nodes,time-ms,status");
  auto back = parse_csv(text);
  REQUIRE(back.size() == rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(back[i].model == rs[i].model);
    CHECK(back[i].formula_id == rs[i].formula_id);
    CHECK(back[i].method == rs[i].method);
    CHECK(back[i].verdict == rs[i].verdict);
    CHECK(back[i].states == rs[i].states);
    CHECK(back[i].edges == rs[i].edges);
    CHECK(back[i].peak_nodes == rs[i].peak_nodes);
    CHECK(back[i].time_ms == doctest::Approx(rs[i].time_ms));
    CHECK(back[i].status == rs[i].status);
  }
  CHECK_THROWS_AS(parse_csv(""), ParseError);
  CHECK_THROWS_AS(parse_csv(csv_header() + "\nm,f0,slap,empty,x,1,1,1,ok\n"), ParseError);
  CHECK_THROWS_AS(parse_csv(csv_header() + "\nm,f0,slap\n"), ParseError);
}

TEST_CASE("bench: cumulative distribution and tallies on a hand-computed fixture") {
  // f0 (non-empty, no X): A 10 ms, B 20 ms, C timeout. Worst ok is B.
  // f1 (empty, X): A 30, B 30, C 15. Worst is A and B (tie), best is C.
  // f2: nothing completes, so the experiment is skipped.
  // f3 (non-empty, no X): A 8, B error, C 8. A and C share the best time.
  std::vector<ExperimentRecord> rs = {
      rec("f0", "A", 10, "non-empty"), rec("f0", "B", 20, "non-empty"),
      rec("f0", "C", 0, "", "timeout"), rec("f1", "A", 30, "empty"),
      rec("f1", "B", 30, "empty"),      rec("f1", "C", 15, "empty"),
      rec("f2", "A", 0, "", "timeout"), rec("f2", "B", 0, "", "error"),
      rec("f2", "C", 0, "", "resource"), rec("f3", "A", 8, "non-empty"),
      rec("f3", "B", 0, "", "error"),   rec("f3", "C", 8, "non-empty"),
  };
  CdfSummary s = cdf_summary(rs, {{"m", "f1"}});
  REQUIRE(s.series.size() == 3);
  CHECK(s.series[0].method == "A");
  CHECK(series_of(s, "A").points == std::vector<double>{50, 100, 100});
  CHECK(series_of(s, "B").points == std::vector<double>{100, 100, 120});
  CHECK(series_of(s, "C").points == std::vector<double>{50, 100, 120});

  TallyGroup ne{true, false};
  TallyGroup ex{false, true};
  REQUIRE(s.tallies.size() == 2);
  CHECK(s.tallies[ne]["A"] == Tally{2, 0, 0});
  CHECK(s.tallies[ne]["B"] == Tally{0, 1, 1});
  CHECK(s.tallies[ne]["C"] == Tally{1, 0, 1});
  CHECK(s.tallies[ex]["A"] == Tally{0, 1, 0});
  CHECK(s.tallies[ex]["B"] == Tally{0, 1, 0});
  CHECK(s.tallies[ex]["C"] == Tally{1, 0, 0});

  std::string table = tally_table(s);
  CHECK(table.find("2/0/0") != std::string::npos);
  CHECK(table.find("non-empty/no-X") != std::string::npos);
  CHECK(table.find("empty/X") != std::string::npos);

  std::string cdf = cdf_csv(s);
  CHECK(cdf.find("A,50") != std::string::npos);
  CHECK(cdf.find("B,120") != std::string::npos);
}

TEST_CASE("bench: degenerate distributions") {
  std::vector<ExperimentRecord> alone = {rec("f0", "A", 3, "empty"), rec("f1", "A", 70, "empty"),
                                         rec("f2", "A", 0.5, "non-empty")};
  CdfSummary own = cdf_summary(alone);
  CHECK(own.series[0].points == std::vector<double>{100, 100, 100});

  std::vector<ExperimentRecord> failing = {
      rec("f0", "A", 3, "empty"),     rec("f0", "B", 0, "", "timeout"),
      rec("f1", "A", 9, "non-empty"), rec("f1", "B", 0, "", "resource")};
  CHECK(series_of(cdf_summary(failing), "B").points == std::vector<double>{120, 120});
}

TEST_CASE("bench: alarms and trivial experiments") {
  std::vector<ExperimentRecord> rs = {
      rec("f0", "A", 5, "empty"),     rec("f0", "B", 50, "empty"),
      rec("f1", "A", 500, "empty"),   rec("f1", "B", 5, "non-empty"),
      rec("f2", "A", 5, "non-empty"), rec("f2", "B", 0, "", "timeout"),
  };
  auto alarms = find_alarms(rs);
  CHECK(alarms == std::set<ExperimentKey>{{"m", "f1"}});
  auto trivial = find_trivial(rs, 100);
  CHECK(trivial == std::set<ExperimentKey>{{"m", "f0"}});
}

TEST_CASE("bench: run matrix executes the full cross product") {
  ModelWorkload example{parse_model_source(kRunningExample),
                     {ltl::parse("a U b"), ltl::parse("G a"), ltl::parse("G F c")}};
  ModelWorkload ring{parse_model_source("ring:2"),
                     {ltl::parse("G F free0"), ltl::parse("F G !used0"), ltl::parse("G wait1")}};
  MatrixOptions opt;
  opt.methods = {Method::Plain, Method::Sop, Method::Slap, Method::SlapFst,
                 Method::Bcz,   Method::Owcty, Method::El};
  for (int jobs : {0, 3}) {
    CAPTURE(jobs);
    opt.jobs = jobs;
    MatrixResult res = run_matrix({example, ring}, opt);
    CHECK(res.records.size() == 42);
    CHECK(res.alarms.empty());
    for (const auto &r : res.records) {
      CHECK(r.status == "ok");
      CHECK((r.verdict == "empty" || r.verdict == "non-empty"));
    }
    CHECK(res.trivial.size() == 6);
  }

  ModelWorkload withx{parse_model_source(kRunningExample), {ltl::parse("X a")}};
  opt.methods = all_methods();
  opt.jobs = 0;
  MatrixResult x = run_matrix({withx}, opt);
  CHECK(x.records.size() == all_methods().size() - 2);
}

TEST_CASE("bench: a run over budget is recorded as a timeout") {
  ModelWorkload big{parse_model_source("philo:10"), {ltl::parse("G F (eat0 && eat1)")}};
  MatrixOptions opt;
  opt.methods = {Method::Plain};
  opt.timeout_s = 0.05;
  for (int jobs : {0, 1}) {
    CAPTURE(jobs);
    opt.jobs = jobs;
    MatrixResult res = run_matrix({big}, opt);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].status == "timeout");
    CHECK(res.records[0].verdict.empty());
  }
}

TEST_CASE("bench: configuration files") {
  BenchConfig c = parse_bench_config(R"(
# desk-scale run
models = philo:3, ring:2
methods = slap, owcty
kind = fairness
props = eat0, eat1
depth = 3
fairness_terms = 1
seed = 9
count = 4
min-states = 50
timeout = 12
jobs = 2
trivial-ms = 10
keep-trivial = yes
)");
  REQUIRE(c.models.size() == 2);
  CHECK(c.models[1].label() == "ring:2");
  CHECK(c.methods == std::vector<Method>{Method::Slap, Method::Owcty});
  CHECK(c.matrix.methods == c.methods);
  CHECK(c.formulas.kind == FormulaKind::Fairness);
  CHECK(c.formulas.props == std::vector<std::string>{"eat0", "eat1"});
  CHECK(c.formulas.depth == 3);
  CHECK(c.formulas.fairness_terms == 1);
  CHECK(c.formulas.seed == 9);
  CHECK(c.count == 4);
  CHECK(c.filter.min_states == 50);
  CHECK(c.matrix.timeout_s == 12);
  CHECK(c.filter.timeout_s == 12);
  CHECK(c.matrix.jobs == 2);
  CHECK(c.matrix.trivial_ms == 10);
  CHECK(c.keep_trivial);

  CHECK(parse_bench_config("models = philo:2\nmethods = all\n").methods == all_methods());
  auto message = [](const std::string &text) {
    try {
      (void)parse_bench_config(text);
    } catch (const UsageError &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("models = philo:2\nmethods = slap\ncolour = red\n").find("line 3") !=
        std::string::npos);
  CHECK(message("models = philo:2\nmethods = slap\ndepth = deep\n").find("depth") !=
        std::string::npos);
  CHECK(!message("methods = slap\n").empty());
  CHECK(parse_bench_config("models = philo:2\n").methods == all_methods());
  CHECK(!message("models = philo:2\nmethods =\n").empty());
  CHECK(!message("models = philo:2\nmethods = fastest\n").empty());
}
