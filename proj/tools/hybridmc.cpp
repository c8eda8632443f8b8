/// Command-line front end: check, translate, model-stats, bench.
///
/// Exit codes: 0 empty language (or success for the other commands),
/// 1 non-empty language, 2 error or timeout (and soundness alarms in bench).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hybridmc/bench/bench.hpp"
#include "hybridmc/cli/engine.hpp"
#include "hybridmc/errors.hpp"
#include "hybridmc/ltl/translate.hpp"

using namespace hmc;

namespace {

constexpr int kEmpty = 0;
constexpr int kNonEmpty = 1;
constexpr int kFailure = 2;

struct CheckArgs {
  std::string formula;
  std::string model;
  std::string method = "product";
  double timeout = 0;
  std::size_t node_limit = 0;
  bool negate = false;
  bool stats = false;
  bool lasso = false;
  bool concretize = false;
  bool csv = false;
};

int cmd_check(const CheckArgs &a) {
  CheckOptions opt;
  opt.method = parse_method(a.method);
  if (a.timeout > 0)
    opt.timeout_s = a.timeout;
  opt.node_limit = a.node_limit;
  opt.negate = a.negate;
  opt.concretize = a.concretize;
  ltl::Formula f = ltl::parse(a.formula);
  check_compatibility(opt.method, opt.negate ? ltl::lnot(f) : f);
  ModelSource src = parse_model_source(a.model);
  CheckReport rep = run_check(f, src, opt);

  if (a.csv) {
    ExperimentRecord r;
    r.model = src.label();
    r.formula_id = "cli";
    r.method = to_string(opt.method);
    r.status = to_string(rep.status);
    if (rep.status == RunStatus::Ok)
      r.verdict = to_string(rep.verdict);
    r.states = rep.states;
    r.edges = rep.edges;
    r.peak_nodes = rep.peak_nodes;
    r.time_ms = rep.time_ms;
    std::cout << csv_header() << '\n' << to_csv(r) << '\n';
  } else if (rep.status != RunStatus::Ok) {
    std::cout << "verdict: unknown (" << to_string(rep.status) << ": " << rep.message << ")\n";
  } else {
    std::cout << "verdict: " << to_string(rep.verdict) << '\n';
  }
  if (a.stats && !a.csv) {
    std::cout << "states: " << rep.states << '\n'
              << "edges: " << rep.edges << '\n'
              << "peak-nodes: " << rep.peak_nodes << '\n';
    char t[64];
    std::snprintf(t, sizeof t, "%.3f", rep.time_ms);
    std::cout << "time-ms: " << t << '\n';
  }
  if (rep.status != RunStatus::Ok)
    return kFailure;
  if (a.lasso && rep.verdict == Verdict::NonEmpty && !a.csv) {
    if (rep.prefix.empty() && rep.cycle.empty()) {
      std::cout << "lasso: not available for symbolic methods\n";
    } else {
      std::cout << "lasso prefix:\n";
      for (const auto &s : rep.prefix)
        std::cout << "  " << s << '\n';
      std::cout << "lasso cycle:\n";
      for (const auto &s : rep.cycle)
        std::cout << "  " << s << '\n';
      std::cout << "lasso replay: " << (rep.lasso_valid ? "valid" : "INVALID") << '\n';
    }
  }
  if (a.concretize && rep.verdict == Verdict::NonEmpty && !a.csv) {
    std::cout << "trace prefix:\n";
    for (const auto &s : rep.concrete_prefix)
      std::cout << "  " << s << '\n';
    std::cout << "trace cycle:\n";
    for (const auto &s : rep.concrete_cycle)
      std::cout << "  " << s << '\n';
    std::cout << "trace replay: " << (rep.concrete_valid ? "valid" : "INVALID") << '\n';
  }
  return rep.verdict == Verdict::Empty ? kEmpty : kNonEmpty;
}

int cmd_translate(const std::string &text, bool negate) {
  ltl::Formula f = ltl::parse(text);
  if (negate)
    f = ltl::lnot(f);
  DdManager mgr;
  PropUniverse ap(mgr);
  ltl::declare_props(f, ap);
  std::cout << export_automaton(ltl::translate(f, ap));
  return 0;
}

int cmd_model_stats(const std::string &model, unsigned scale) {
  ModelSource src = scale > 0 ? parse_model_source(model + ":" + std::to_string(scale))
                              : parse_model_source(model);
  auto start = std::chrono::steady_clock::now();
  LoadedModel m = load_model(src);
  Bdd reach = m.model->reachable();
  BigCount n = m.model->count(reach);
  double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  char approx[64];
  std::snprintf(approx, sizeof approx, "%.2e", n.convert_to<double>());
  std::cout << "model: " << src.label() << '\n'
            << "reachable: " << n.str() << " (" << approx << ")\n"
            << "state-bits: " << m.model->state_vars().size() << '\n'
            << "partitions: " << m.model->partitions() << '\n'
            << "dd-nodes: " << m.mgr->node_count(reach) << '\n';
  char t[64];
  std::snprintf(t, sizeof t, "%.3f", ms);
  std::cout << "time-ms: " << t << '\n';
  return 0;
}

struct BenchArgs {
  std::string config;
  int jobs = -1;
  std::string out;
  std::string cdf;
  std::string formulas;
  std::string tallies;
};

void write_file(const std::string &path, const std::string &text) {
  std::ofstream o(path, std::ios::binary);
  if (!o)
    throw UsageError("cannot write '" + path + "'");
  o << text;
}

int cmd_bench(const BenchArgs &a) {
  std::ifstream in(a.config);
  if (!in)
    throw UsageError("cannot open '" + a.config + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  BenchConfig cfg = parse_bench_config(ss.str());
  if (a.jobs >= 0)
    cfg.matrix.jobs = a.jobs;

  std::vector<ModelWorkload> work;
  std::set<ExperimentKey> with_next;
  std::ostringstream flist;
  for (const auto &m : cfg.models) {
    std::cerr << "generating " << cfg.count << " formulas for " << m.label() << '\n';
    ModelWorkload w{m, gen_filtered_formulas(cfg.formulas, cfg.count, m, cfg.filter)};
    for (std::size_t i = 0; i < w.formulas.size(); ++i) {
      std::string id = "f" + std::to_string(i);
      flist << m.label() << ',' << id << ',' << ltl::to_string(w.formulas[i]) << '\n';
      if (ltl::contains_next(w.formulas[i]))
        with_next.insert({m.label(), id});
    }
    work.push_back(std::move(w));
  }
  if (!a.formulas.empty())
    write_file(a.formulas, flist.str());

  MatrixResult res = run_matrix(work, cfg.matrix);
  std::ostringstream csv;
  csv << csv_header() << '\n';
  for (const auto &r : res.records)
    csv << to_csv(r) << '\n';
  if (a.out.empty())
    std::cout << csv.str();
  else
    write_file(a.out, csv.str());

  std::vector<ExperimentRecord> kept;
  for (const auto &r : res.records)
    if (cfg.keep_trivial || !res.trivial.count({r.model, r.formula_id}))
      kept.push_back(r);
  std::cerr << res.trivial.size() << " trivial experiment(s)"
            << (cfg.keep_trivial ? " kept" : " left out of the summary") << '\n';
  CdfSummary summary = cdf_summary(kept, with_next);
  if (!a.cdf.empty())
    write_file(a.cdf, cdf_csv(summary));
  if (!a.tallies.empty())
    write_file(a.tallies, tally_table(summary));
  std::cerr << tally_table(summary);

  for (const auto &[model, fid] : res.alarms)
    std::cerr << "SOUNDNESS ALARM: methods disagree on " << model << ' ' << fid << '\n';
  return res.alarms.empty() ? 0 : kFailure;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hybrid LTL model checker"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto *check = app.add_subcommand("check", "Decide emptiness of formula x model");
  check->add_option("-f,--formula", ca.formula, "LTL formula")->required();
  check->add_option("-m,--model", ca.model, "name:scale, or a .ks/.pn/.net file")->required();
  check->add_option("--method", ca.method,
                    "product, sog, sop, slap, slap-fst, bcz, owcty or el")
      ->capture_default_str();
  check->add_option("--timeout", ca.timeout, "seconds (0 for none)");
  check->add_option("--node-limit", ca.node_limit, "BDD node ceiling (0 for none)");
  check->add_flag("--negate", ca.negate, "check the negation of the formula");
  check->add_flag("--stats", ca.stats, "print expansion statistics");
  check->add_flag("--lasso", ca.lasso, "print the abstract counterexample");
  check->add_flag("--concretize", ca.concretize, "print a concrete Kripke trace");
  check->add_flag("--csv", ca.csv, "print the result as a CSV record");

  std::string tr_formula;
  bool tr_negate = false;
  auto *translate = app.add_subcommand("translate", "Print the automaton of a formula");
  translate->add_option("formula", tr_formula, "LTL formula")->required();
  translate->add_flag("--negate", tr_negate, "translate the negation");

  std::string ms_model;
  unsigned ms_scale = 0;
  auto *stats = app.add_subcommand("model-stats", "Count reachable states of a model");
  stats->add_option("model", ms_model, "builtin name, name:scale, or a model file")->required();
  stats->add_option("scale", ms_scale, "scale of a builtin model");

  BenchArgs ba;
  auto *bench = app.add_subcommand("bench", "Run a benchmark matrix");
  bench->add_option("--config", ba.config, "key = value configuration file")->required();
  bench->add_option("--jobs", ba.jobs, "worker processes (0: in process)");
  bench->add_option("--out", ba.out, "CSV output file (default stdout)");
  bench->add_option("--cdf", ba.cdf, "cumulative distribution CSV output");
  bench->add_option("--tallies", ba.tallies, "win/lose/fail table output");
  bench->add_option("--formulas", ba.formulas, "generated formula list output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kFailure;
  }

  try {
    if (*check)
      return cmd_check(ca);
    if (*translate)
      return cmd_translate(tr_formula, tr_negate);
    if (*stats)
      return cmd_model_stats(ms_model, ms_scale);
    if (*bench)
      return cmd_bench(ba);
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << " (at " << e.position() << ")\n";
    return kFailure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
