/// @file common.hpp
/// @brief Shared plumbing for product graphs: state registries and the
/// explicit view of a Kripke structure used by the synchronized product.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hybridmc/model/kripke.hpp"
#include "hybridmc/tgba/emptiness.hpp"
#include "hybridmc/tgba/tgba.hpp"

namespace hmc {

/// Product state built from an automaton state and a symbolic set. For
/// divergent states `set` holds the label cube instead of a state set.
struct AggState {
  enum class Kind : std::uint8_t { Aggregate, Divergent };
  Kind kind = Kind::Aggregate;
  AutState q = 0;
  Bdd set;

  friend bool operator==(const AggState &a, const AggState &b) {
    return a.kind == b.kind && a.q == b.q && a.set == b.set;
  }
};

struct AggStateHash {
  std::size_t operator()(const AggState &s) const noexcept {
    std::uint64_t h = (std::uint64_t{s.q} << 33) ^ (std::uint64_t{s.set.id()} << 1) ^
                      static_cast<std::uint64_t>(s.kind);
    return std::hash<std::uint64_t>{}(h * 0x9E3779B97F4A7C15ull);
  }
};

/// Dense numbering of product states in discovery order.
template <class Key, class Hash> class StateRegistry {
public:
  /// Returns the id of `k`, creating it if needed.
  StateId intern(const Key &k) {
    auto it = ids_.find(k);
    if (it != ids_.end())
      return it->second;
    StateId id = static_cast<StateId>(keys_.size());
    keys_.push_back(k);
    ids_.emplace(k, id);
    return id;
  }
  [[nodiscard]] const Key &key(StateId id) const { return keys_.at(id); }
  [[nodiscard]] std::size_t size() const noexcept { return keys_.size(); }

private:
  std::unordered_map<Key, StateId, Hash> ids_;
  std::vector<Key> keys_;
};

/// Tracks the expansion counters every product reports.
class ExpansionCounter {
public:
  /// Records a successors() call; counts the state and its edges once.
  void expanded(StateId s, std::size_t edges) {
    if (s >= seen_.size())
      seen_.resize(std::size_t{s} + 1, false);
    if (!seen_[s]) {
      seen_[s] = true;
      ++expanded_;
      edges_ += edges;
    }
  }
  [[nodiscard]] ExpansionStats stats(std::size_t created, const DdManager &m) const {
    return {created, expanded_, edges_, m.stats().peak_nodes};
  }

private:
  std::vector<bool> seen_;
  std::size_t expanded_ = 0;
  std::size_t edges_ = 0;
};

/// A Kripke structure seen node by node, as needed by the synchronized
/// product.
class ExplicitKripke {
public:
  using Node = std::uint32_t;
  virtual ~ExplicitKripke() = default;

  virtual Node initial() = 0;
  virtual void successors(Node n, std::vector<Node> &out) = 0;
  /// lambda(n) |= g
  virtual bool satisfies(Node n, const BoolExpr &g) = 0;
  [[nodiscard]] virtual std::string describe(Node n) const = 0;
  [[nodiscard]] virtual std::size_t node_count() const = 0;
  [[nodiscard]] virtual DdManager &manager() const = 0;
};

/// Nodes are the individual states of a symbolic model.
class ModelStates : public ExplicitKripke {
public:
  explicit ModelStates(KripkeModel &m);

  Node initial() override;
  void successors(Node n, std::vector<Node> &out) override;
  bool satisfies(Node n, const BoolExpr &g) override;
  [[nodiscard]] std::string describe(Node n) const override;
  [[nodiscard]] std::size_t node_count() const override { return states_.size(); }
  [[nodiscard]] DdManager &manager() const override { return model_->manager(); }

  /// Singleton set of node n.
  [[nodiscard]] const Bdd &state(Node n) const { return states_.at(n); }
  [[nodiscard]] KripkeModel &model() const { return *model_; }

private:
  Node intern(const Bdd &singleton);

  KripkeModel *model_;
  std::vector<Bdd> states_;
  std::unordered_map<NodeId, Node> ids_;
  std::vector<std::string> names_;
};

/// PropUniverse variables of a proposition set.
VarSet prop_vars(const PropUniverse &u, const PropSet &props);

/// The cube l restricted to the propositions of `keep` (others quantified).
BoolExpr restrict_label(const PropUniverse &u, const BoolExpr &l, const PropSet &keep);

} // namespace hmc
