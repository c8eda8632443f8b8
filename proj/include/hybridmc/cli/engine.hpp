/// @file engine.hpp
/// @brief Loading models and running one emptiness check end to end; shared
/// by the command-line tool and the benchmark harness.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridmc/ltl/formula.hpp"
#include "hybridmc/model/kripke.hpp"
#include "hybridmc/products/method.hpp"

namespace hmc {

/// Where a model comes from: "philo:10" style builtin names, or a file
/// ending in .ks (explicit Kripke structure) or .pn / .net (Petri net).
struct ModelSource {
  enum class Kind { Builtin, ExplicitFile, PetriFile };
  Kind kind = Kind::Builtin;
  std::string name; // builtin name
  unsigned scale = 0;
  std::string path;

  /// Short name used in reports: "philo:10" or the file path.
  [[nodiscard]] std::string label() const;
};

/// Throws UsageError on an unknown builtin or extension.
ModelSource parse_model_source(std::string_view text);

/// A model together with the manager and universe it lives in.
struct LoadedModel {
  std::unique_ptr<DdManager> mgr;
  std::unique_ptr<PropUniverse> ap;
  std::unique_ptr<KripkeModel> model;
};

LoadedModel load_model(const ModelSource &src, DdConfig config = {});

struct CheckOptions {
  Method method = Method::Plain;
  /// Wall-clock budget in seconds; unset for none.
  std::optional<double> timeout_s;
  /// Ceiling on BDD nodes; 0 for none.
  std::size_t node_limit = 0;
  /// Check the negation of the formula instead.
  bool negate = false;
  /// On a non-empty verdict, also extract a concrete trace.
  bool concretize = false;
  /// Keep an abstract lasso (rendered) for non-empty verdicts.
  bool keep_lasso = true;
};

enum class RunStatus { Ok, Timeout, Resource, Error };
const char *to_string(RunStatus s);

struct CheckReport {
  RunStatus status = RunStatus::Ok;
  std::string message; // for non-ok statuses
  Verdict verdict = Verdict::Empty;
  std::uint64_t states = 0;
  std::uint64_t edges = 0;
  std::uint64_t peak_nodes = 0;
  double time_ms = 0;
  /// Rendered abstract lasso: one described state per line.
  std::vector<std::string> prefix;
  std::vector<std::string> cycle;
  bool lasso_valid = false;
  /// Rendered concrete trace and its validation outcome.
  std::vector<std::string> concrete_prefix;
  std::vector<std::string> concrete_cycle;
  bool concrete_valid = false;
};

/// Throws UsageError when `m` needs an X-free formula and `f` has X.
void check_compatibility(Method m, const ltl::Formula &f);

/// Runs one check. UsageError, ParseError and ModelError propagate; budget
/// exhaustion is reported through `status`.
CheckReport run_check(const ltl::Formula &f, const ModelSource &src, const CheckOptions &opt);

/// Same, on an already loaded model. The manager's deadline is set and
/// cleared by the call; `node_limit` is ignored since the ceiling is fixed
/// when the manager is created (see load_model).
CheckReport run_check(const ltl::Formula &f, LoadedModel &m, const CheckOptions &opt);

} // namespace hmc
