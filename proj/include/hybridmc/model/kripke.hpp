/// @file kripke.hpp
/// @brief Symbolic Kripke structures and the set operators built on them.
///
/// A model encodes its states on "current" BDD variables, each paired with
/// an adjacent "next" variable used by the transition relation. Sets of
/// states (aggregates) are BDDs over the current variables only.

#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hybridmc/logic/props.hpp"

namespace hmc {

class KripkeModel {
public:
  KripkeModel(DdManager &mgr, PropUniverse &ap) : mgr_(&mgr), ap_(&ap) {}
  virtual ~KripkeModel() = default;
  KripkeModel(const KripkeModel &) = delete;
  KripkeModel &operator=(const KripkeModel &) = delete;

  [[nodiscard]] DdManager &manager() const noexcept { return *mgr_; }
  [[nodiscard]] PropUniverse &ap() const noexcept { return *ap_; }

  /// {s0}
  [[nodiscard]] virtual Bdd initial() const = 0;

  /// Number of transition-relation partitions.
  [[nodiscard]] virtual std::size_t partitions() const = 0;
  /// Successors of `s` through partition `t`.
  virtual Bdd image(const Bdd &s, std::size_t t) = 0;
  /// Predecessors of `s` through partition `t`.
  virtual Bdd preimage(const Bdd &s, std::size_t t) = 0;

  /// States where proposition p holds. Throws UsageError if the model does
  /// not define p.
  [[nodiscard]] virtual Bdd label(PropId p) const = 0;

  /// Renders one state given as a minterm over state_vars().
  [[nodiscard]] virtual std::string describe_state(const std::vector<bool> &bits) const = 0;

  [[nodiscard]] const VarSet &state_vars() const noexcept { return cur_; }
  [[nodiscard]] const VarSet &next_vars() const noexcept { return next_; }
  /// next variable paired with each current variable (same order).
  [[nodiscard]] const std::vector<std::pair<VarIndex, VarIndex>> &var_pairs() const noexcept {
    return pairs_;
  }

  Bdd image(const Bdd &s);
  Bdd preimage(const Bdd &s);

  /// Sat(f): states whose label satisfies the Boolean expression f.
  Bdd sat(const BoolExpr &f);

  /// lambda(s) restricted to E, for a set whose members agree on E (for a
  /// non-homogeneous set the value of each proposition is "some member
  /// satisfies it").
  BoolExpr observed_label(const Bdd &states, const PropSet &e);
  /// Full label of a single state as a cube over every proposition the
  /// model defines.
  BoolExpr state_label(const Bdd &singleton);

  BigCount count(const Bdd &s);
  /// Calls `visit` with a singleton set per member of `s`, in the
  /// lexicographic order of the state encoding.
  void for_each_state(const Bdd &s, const std::function<bool(const Bdd &)> &visit);
  std::string describe(const Bdd &singleton);

  /// Least fixpoint of image from the initial state.
  Bdd reachable();

  /// Propositions this model can evaluate.
  [[nodiscard]] const PropSet &defined_props() const noexcept { return defined_; }

protected:
  /// Allocates `n` interleaved current/next variable pairs.
  void allocate_state_vars(std::size_t n);
  void set_defined_props(PropSet p) { defined_ = std::move(p); }

private:
  DdManager *mgr_;
  PropUniverse *ap_;
  VarSet cur_, next_;
  std::vector<std::pair<VarIndex, VarIndex>> pairs_;
  PropSet defined_;
  std::size_t subst_size_ = 0;
  Substitution subst_;
  std::unordered_map<NodeId, std::pair<BoolExpr, Bdd>> sat_cache_;
  std::optional<Bdd> reachable_;
};

/// SuccF(a, f) = { s' | s in a, s -> s', lambda(s') |= f }
Bdd succ_f(KripkeModel &m, const Bdd &a, const BoolExpr &f);
/// Least superset of a closed under SuccF(., f).
Bdd reach_f(KripkeModel &m, const Bdd &a, const BoolExpr &f);
/// FSucc(a, f) = { s' | s in a, lambda(s) |= f, s -> s' }
Bdd f_succ(KripkeModel &m, const Bdd &a, const BoolExpr &f);
/// Least superset of a closed under FSucc(., f).
Bdd f_reach(KripkeModel &m, const Bdd &a, const BoolExpr &f);
/// True iff the subgraph induced by a has a cycle.
bool contains_cycle(KripkeModel &m, const Bdd &a);

struct ObservedClass {
  /// Cube over E (the constant true when E is empty).
  BoolExpr label;
  /// Values over the whole universe; propositions outside E are false.
  Assignment values;
  Bdd states;
};

/// Splits a into classes homogeneous with respect to E, ordered
/// lexicographically on the assignment (E in proposition order, false first).
std::vector<ObservedClass> partition_by_observed(KripkeModel &m, const Bdd &a, const PropSet &e);

} // namespace hmc
