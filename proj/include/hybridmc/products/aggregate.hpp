/// @file aggregate.hpp
/// @brief Hybrid products whose states pair an automaton state with a
/// symbolic set of Kripke states: SOP, SLAP (and its FST variant) and BCZ.

#pragma once

#include <optional>

#include "hybridmc/products/common.hpp"

namespace hmc {

/// Shared skeleton: state registry keyed by AggState, successor caching and
/// counters. Subclasses implement expand().
class AggregateProduct : public LazyGraph {
public:
  AggregateProduct(const Tgba &a, KripkeModel &m);

  StateId initial() override;
  void successors(StateId s, std::vector<GraphEdge> &out) override;
  [[nodiscard]] unsigned acc_count() const override { return aut_.acc_count(); }
  [[nodiscard]] std::string describe(StateId s) const override;
  [[nodiscard]] ExpansionStats stats() const override;

  [[nodiscard]] const AggState &state(StateId s) const { return reg_.key(s); }
  [[nodiscard]] std::size_t size() const noexcept { return reg_.size(); }
  [[nodiscard]] const Tgba &automaton() const noexcept { return aut_; }
  [[nodiscard]] KripkeModel &model() const noexcept { return *model_; }

protected:
  virtual AggState make_initial() = 0;
  virtual void expand(const AggState &s, std::vector<std::pair<AccSet, AggState>> &out) = 0;

  Tgba aut_;
  KripkeModel *model_;

private:
  StateRegistry<AggState, AggStateHash> reg_;
  ExpansionCounter counter_;
  std::vector<std::pair<AccSet, AggState>> buf_;
};

/// Symbolic Observation Product. The observed alphabet at automaton state q
/// is FV(q); divergent states hold a cube over FV(q). Throws UsageError if
/// the automaton is not flagged stuttering-invariant.
class SopProduct : public AggregateProduct {
public:
  SopProduct(const Tgba &a, KripkeModel &m);

  /// lambda_{FV(q)}(a) for aggregates, the stored cube for divergent states.
  [[nodiscard]] BoolExpr label_of(const AggState &s);
  [[nodiscard]] const PropSet &observed(AutState q) const { return fv_.at(q); }

protected:
  AggState make_initial() override;
  void expand(const AggState &s, std::vector<std::pair<AccSet, AggState>> &out) override;

private:
  std::vector<PropSet> fv_;
};

/// Self-Loop Aggregation Product; with `fst` set, terminal automaton states
/// are resolved by a symbolic accepting-cycle search inside the aggregate.
class SlapProduct : public AggregateProduct {
public:
  SlapProduct(const Tgba &a, KripkeModel &m, bool fst = false);

  [[nodiscard]] bool fst() const noexcept { return fst_; }
  /// Symbolic search used by the FST variant: non-empty iff some run from
  /// `a` staying on q's self-loops is accepting. Exposed for testing.
  bool terminal_accepts(AutState q, const Bdd &a);

protected:
  AggState make_initial() override;
  void expand(const AggState &s, std::vector<std::pair<AccSet, AggState>> &out) override;

private:
  bool fst_;
  std::vector<bool> terminal_;
};

/// Aggregates of one-step successors sharing the values of the automaton's
/// propositions; no closure.
class BczProduct : public AggregateProduct {
public:
  BczProduct(const Tgba &a, KripkeModel &m);

protected:
  AggState make_initial() override;
  void expand(const AggState &s, std::vector<std::pair<AccSet, AggState>> &out) override;

private:
  PropSet used_;
};

} // namespace hmc
