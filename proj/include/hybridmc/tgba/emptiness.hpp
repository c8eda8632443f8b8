/// @file emptiness.hpp
/// @brief Lazily expanded TGBA-shaped graphs and their on-the-fly emptiness check.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hybridmc/tgba/tgba.hpp"

namespace hmc {

/// Dense handle of a product state, assigned in discovery order.
using StateId = std::uint32_t;

struct GraphEdge {
  AccSet acc;
  StateId dst;
  friend bool operator==(const GraphEdge &, const GraphEdge &) = default;
};

struct ExpansionStats {
  std::size_t states_created = 0;
  std::size_t states_expanded = 0;
  std::size_t edges = 0;
  std::size_t peak_nodes = 0;
};

/// A graph whose successors are computed on demand. Successor enumeration
/// must be deterministic and repeatable for a given handle.
class LazyGraph {
public:
  virtual ~LazyGraph() = default;

  virtual StateId initial() = 0;
  /// Replaces `out` with the successors of `s`.
  virtual void successors(StateId s, std::vector<GraphEdge> &out) = 0;
  [[nodiscard]] virtual unsigned acc_count() const = 0;
  [[nodiscard]] virtual std::string describe(StateId s) const = 0;
  [[nodiscard]] virtual ExpansionStats stats() const = 0;
};

/// One step of a lasso: a state and the acceptance set of the edge leaving it.
struct LassoStep {
  StateId state;
  AccSet acc;
};

/// prefix[0] is the initial state (unless the prefix is empty, in which case
/// the cycle starts at the initial state); the last prefix edge enters
/// cycle[0]; the last cycle edge returns to cycle[0].
struct Lasso {
  std::vector<LassoStep> prefix;
  std::vector<LassoStep> cycle;
};

enum class Verdict { Empty, NonEmpty };

struct EmptinessResult {
  Verdict verdict = Verdict::Empty;
  std::optional<Lasso> lasso;
  std::size_t states_visited = 0;
  std::size_t edges_traversed = 0;
};

const char *to_string(Verdict v);

/// Couvreur-style SCC-based emptiness check. Explores successors in the
/// order the graph enumerates them and stops as soon as an SCC covering all
/// acceptance conditions is found.
EmptinessResult check_emptiness(LazyGraph &g);

/// Replays a lasso: every step must be an edge of `g` with the recorded
/// acceptance set, the cycle must close and cover all conditions. On
/// failure returns false and fills `why`.
bool validate_lasso(LazyGraph &g, const Lasso &lasso, std::string *why = nullptr);

/// Expands every state reachable from the initial one (breadth first) and
/// returns the number of states and edges seen.
ExpansionStats explore_all(LazyGraph &g);

/// Graph given by explicit adjacency lists; convenient for tests and for
/// small hand-made instances.
class ExplicitGraph : public LazyGraph {
public:
  ExplicitGraph(unsigned acc_count, std::vector<std::vector<GraphEdge>> adjacency,
                StateId init = 0);

  StateId initial() override;
  void successors(StateId s, std::vector<GraphEdge> &out) override;
  [[nodiscard]] unsigned acc_count() const override { return acc_count_; }
  [[nodiscard]] std::string describe(StateId s) const override;
  [[nodiscard]] ExpansionStats stats() const override { return stats_; }

private:
  unsigned acc_count_;
  std::vector<std::vector<GraphEdge>> adj_;
  StateId init_;
  std::vector<bool> expanded_;
  std::vector<bool> created_;
  ExpansionStats stats_;
};

} // namespace hmc
