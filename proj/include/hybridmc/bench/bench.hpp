/// @file bench.hpp
/// @brief Benchmark harness: random formula generation, the run matrix and
/// cumulative-distribution summaries.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hybridmc/cli/engine.hpp"
#include "hybridmc/ltl/formula.hpp"

namespace hmc {

enum class FormulaKind { Random, Fairness, RandomWithX };
const char *to_string(FormulaKind k);
FormulaKind parse_formula_kind(std::string_view text);

struct FormulaSpec {
  FormulaKind kind = FormulaKind::Random;
  /// Propositions to draw from; must be nonempty.
  std::vector<std::string> props;
  /// Maximal operator nesting of a generated formula (or of the body of a
  /// fairness formula).
  int depth = 4;
  /// Number of GF terms in the fairness premise.
  int fairness_terms = 2;
  /// Probability of stopping at a leaf before the depth bound.
  double p_leaf = 0.25;
  /// Probability that an inner node is unary (otherwise binary).
  double p_unary = 0.5;
  std::uint64_t seed = 1;
};

/// One formula drawn from `rng`: operators are chosen uniformly within the
/// chosen arity (unary: ! F G, plus X when allowed; binary: && || -> U R).
ltl::Formula random_formula(std::mt19937_64 &rng, const FormulaSpec &spec);

/// n formulas, reproducible from spec.seed. RandomWithX formulas all
/// contain X; the other kinds never do.
std::vector<ltl::Formula> gen_formulas(const FormulaSpec &spec, int n);

struct FilterOptions {
  /// Minimal number of states of the full plain product.
  std::size_t min_states = 100;
  /// Allowed imbalance between empty and non-empty verdicts, as a fraction
  /// of n.
  double balance = 0.10;
  /// Candidates drawn before giving up.
  int max_attempts = 2000;
  /// Budget per candidate while sizing its product, in seconds.
  double timeout_s = 30;
};

/// Formulas whose plain product with the model has at least min_states
/// states, split between empty and non-empty verdicts. Throws
/// ResourceError when the attempt budget runs out.
std::vector<ltl::Formula> gen_filtered_formulas(const FormulaSpec &spec, int n,
                                                const ModelSource &model, const FilterOptions &opt);

/// One CSV row: model, formula-id, method, verdict, states, edges,
/// peak-nodes, time-ms, status.
struct ExperimentRecord {
  std::string model;
  std::string formula_id;
  std::string method;
  std::string verdict; // "empty", "non-empty" or "" when status != ok
  std::uint64_t states = 0;
  std::uint64_t edges = 0;
  std::uint64_t peak_nodes = 0;
  double time_ms = 0;
  std::string status = "ok"; // ok | timeout | resource | error
};

std::string csv_header();
std::string to_csv(const ExperimentRecord &r);
/// Parses CSV produced by to_csv (header line required).
std::vector<ExperimentRecord> parse_csv(std::string_view text);

struct MatrixOptions {
  std::vector<Method> methods;
  double timeout_s = 30;
  std::size_t node_limit = 0;
  /// Worker processes running at once; 0 runs everything in this process.
  int jobs = 1;
  /// Experiments where every ok run is faster than this are trivial.
  double trivial_ms = 100;
};

/// A model and the formulas to check on it; formula ids are "f0", "f1", ...
struct ModelWorkload {
  ModelSource model;
  std::vector<ltl::Formula> formulas;
};

using ExperimentKey = std::pair<std::string, std::string>; // model, formula-id

struct MatrixResult {
  std::vector<ExperimentRecord> records;
  std::set<ExperimentKey> trivial;
  /// Experiments whose ok runs disagree on the verdict.
  std::set<ExperimentKey> alarms;
};

/// Runs every (model, formula, method) combination. A failing run is
/// recorded with status=error and never aborts the matrix.
MatrixResult run_matrix(const std::vector<ModelWorkload> &work, const MatrixOptions &opt);

/// Experiments whose ok records disagree on the verdict.
std::set<ExperimentKey> find_alarms(const std::vector<ExperimentRecord> &records);
/// Experiments where every ok record is below `trivial_ms`.
std::set<ExperimentKey> find_trivial(const std::vector<ExperimentRecord> &records,
                                     double trivial_ms);

/// Percentage points of one method: time relative to the slowest ok method
/// of the same experiment, 120 for a failed run. Sorted ascending.
struct CdfSeries {
  std::string method;
  std::vector<double> points;
};

struct Tally {
  int win = 0;
  int lose = 0;
  int fail = 0;
  friend bool operator==(const Tally &, const Tally &) = default;
};

/// Group of an experiment: agreed verdict and presence of X.
struct TallyGroup {
  bool non_empty = false;
  bool has_next = false;
  friend auto operator<=>(const TallyGroup &, const TallyGroup &) = default;
};

struct CdfSummary {
  std::vector<CdfSeries> series; // one per method, in first-seen order
  /// tallies[group][method]
  std::map<TallyGroup, std::map<std::string, Tally>> tallies;
};

/// Experiments without any ok record are skipped. `with_next` lists the
/// experiments whose formula contains X.
CdfSummary cdf_summary(const std::vector<ExperimentRecord> &records,
                       const std::set<ExperimentKey> &with_next = {});

/// CSV rows "method,percentage,cumulative" (one per point).
std::string cdf_csv(const CdfSummary &s);
/// Text table: one row per method, one "win/lose/fail" column per group.
std::string tally_table(const CdfSummary &s);

/// Settings of a `bench` run, read from "key = value" lines ('#' comments).
struct BenchConfig {
  std::vector<ModelSource> models;
  std::vector<Method> methods;
  FormulaSpec formulas;
  int count = 10;
  FilterOptions filter;
  MatrixOptions matrix;
  bool keep_trivial = false;
};

/// Throws UsageError naming the line of an unknown key or bad value.
BenchConfig parse_bench_config(std::string_view text);

} // namespace hmc
