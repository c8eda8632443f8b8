/// @file symbolic.hpp
/// @brief Fully symbolic product of a TGBA and a Kripke model, and the
/// OWCTY and Emerson-Lei emptiness checks on it.
///
/// Automaton states are log-encoded on fresh BDD variables allocated after
/// the model's. Each automaton edge q1 -(g,ac)-> q2 acts as the relation
/// {(q1,s) -> (q2,s') | s |= g, s -> s'}; relations are applied through the
/// model's own (partitioned) image and preimage.

#pragma once

#include <cstdint>
#include <vector>

#include "hybridmc/model/kripke.hpp"
#include "hybridmc/tgba/emptiness.hpp"
#include "hybridmc/tgba/tgba.hpp"

namespace hmc {

class SymbolicProduct {
public:
  SymbolicProduct(const Tgba &a, KripkeModel &m);

  [[nodiscard]] const Tgba &automaton() const noexcept { return aut_; }
  [[nodiscard]] KripkeModel &model() const noexcept { return *model_; }
  [[nodiscard]] DdManager &manager() const noexcept { return model_->manager(); }
  [[nodiscard]] const VarSet &automaton_vars() const noexcept { return aut_vars_; }

  /// Cube of the code of q over the automaton variables.
  [[nodiscard]] Bdd code(AutState q) const { return codes_.at(q); }
  /// {(q0, s0)}
  [[nodiscard]] Bdd initial() const;

  /// Successors of x along every edge.
  Bdd post(const Bdd &x);
  /// Successors of x along edges carrying condition c.
  Bdd post(const Bdd &x, unsigned c);
  /// Predecessors of y along every edge.
  Bdd pre(const Bdd &y);
  /// Predecessors of y along edges carrying condition c.
  Bdd pre(const Bdd &y, unsigned c);

  /// Forward fixpoint from initial().
  Bdd reachable();
  /// Number of product states in x.
  BigCount count(const Bdd &x);

private:
  /// Edges from q1 to q2 grouped: guard of all of them and per condition.
  struct Group {
    AutState src;
    AutState dst;
    Bdd any;
    std::vector<Bdd> by_cond;
  };
  Bdd post_impl(const Bdd &x, int c);
  Bdd pre_impl(const Bdd &y, int c);

  Tgba aut_;
  KripkeModel *model_;
  VarSet aut_vars_;
  VarSet all_vars_;
  std::vector<Bdd> codes_;
  std::vector<Group> groups_;
  std::optional<Bdd> reachable_;
};

struct SymbolicResult {
  Verdict verdict = Verdict::Empty;
  std::size_t outer_iterations = 0;
  std::size_t peak_nodes = 0;
  /// Cardinality of the reachable product.
  BigCount reachable_states = 0;
};

/// One-way-catch-them-young hull iteration on the forward relation: prune
/// states without a predecessor in the hull and states not reachable
/// within the hull from a target of each condition.
SymbolicResult owcty(SymbolicProduct &p);

/// Emerson-Lei: greatest fixpoint of the states that can reach, inside the
/// candidate set, an edge bearing each condition.
SymbolicResult el(SymbolicProduct &p);

} // namespace hmc
