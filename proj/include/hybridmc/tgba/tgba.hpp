/// @file tgba.hpp
/// @brief Transition-based generalized Büchi automata over a PropUniverse.

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hybridmc/logic/props.hpp"

namespace hmc {

/// Set of acceptance-condition indices, at most 64 conditions.
class AccSet {
public:
  constexpr AccSet() = default;
  constexpr explicit AccSet(std::uint64_t bits) : bits_(bits) {}

  /// {0, ..., n-1}
  static AccSet all(unsigned n);
  static AccSet single(unsigned i);

  [[nodiscard]] constexpr std::uint64_t bits() const noexcept { return bits_; }
  [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }
  [[nodiscard]] constexpr bool contains(unsigned i) const noexcept {
    return i < 64 && ((bits_ >> i) & 1u) != 0;
  }
  [[nodiscard]] constexpr bool subset_of(AccSet o) const noexcept {
    return (bits_ & ~o.bits_) == 0;
  }
  [[nodiscard]] int count() const noexcept { return std::popcount(bits_); }
  [[nodiscard]] std::vector<unsigned> indices() const;

  constexpr AccSet operator|(AccSet o) const noexcept { return AccSet(bits_ | o.bits_); }
  constexpr AccSet operator&(AccSet o) const noexcept { return AccSet(bits_ & o.bits_); }
  constexpr AccSet operator-(AccSet o) const noexcept { return AccSet(bits_ & ~o.bits_); }
  AccSet &operator|=(AccSet o) noexcept {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr auto operator<=>(AccSet, AccSet) = default;

  /// "{0 2}" style rendering.
  [[nodiscard]] std::string to_string() const;

private:
  std::uint64_t bits_ = 0;
};

using AutState = std::uint32_t;

struct TgbaEdge {
  AutState src;
  AutState dst;
  BoolExpr guard;
  AccSet acc;
};

/// Automaton <AP, Q, F, delta, q0>. States are dense ids; edges are grouped
/// by source in insertion order.
class Tgba {
public:
  Tgba(PropUniverse &ap, unsigned acc_count = 0);

  AutState add_state(std::string name = {});
  /// Adds an edge; an unsatisfiable guard is dropped.
  void add_edge(AutState src, AutState dst, BoolExpr guard, AccSet acc);

  void set_initial(AutState q);
  void set_acc_count(unsigned n);

  [[nodiscard]] PropUniverse &ap() const noexcept { return *ap_; }
  [[nodiscard]] std::size_t num_states() const noexcept { return out_.size(); }
  [[nodiscard]] AutState initial() const noexcept { return initial_; }
  [[nodiscard]] unsigned acc_count() const noexcept { return acc_count_; }
  [[nodiscard]] AccSet all_acc() const { return AccSet::all(acc_count_); }
  [[nodiscard]] const std::vector<TgbaEdge> &out(AutState q) const;
  [[nodiscard]] std::size_t num_edges() const;
  [[nodiscard]] const std::string &state_name(AutState q) const;

  /// Set by the translator when the source formula has no X operator.
  [[nodiscard]] bool stutter_invariant() const noexcept { return stutter_invariant_; }
  void set_stutter_invariant(bool v) noexcept { stutter_invariant_ = v; }

  /// Propositions occurring in some guard.
  [[nodiscard]] PropSet used_props() const;

private:
  PropUniverse *ap_;
  unsigned acc_count_;
  AutState initial_ = 0;
  bool stutter_invariant_ = false;
  std::vector<std::vector<TgbaEdge>> out_;
  std::vector<std::string> names_;
};

/// If F is empty, adds one condition carried by exactly the back edges of a
/// DFS from q0, so that every cycle bears it. Identity otherwise.
Tgba ensure_acceptance(const Tgba &a);

/// Removes unreachable states and states from which no accepting cycle is
/// reachable, and clears acceptance marks on edges outside any SCC. The
/// initial state is kept even when the language is empty. States are
/// renumbered in BFS order from q0.
Tgba prune(const Tgba &a);

/// Language-preserving reduction: an edge loses the part of its guard
/// already covered by a parallel edge (same destination) with a superset of
/// its marks, states are merged by the coarsest bisimulation respecting
/// guards and marks, and conditions carried by every edge are dropped.
/// The result is pruned.
Tgba reduce(const Tgba &a);

/// FV(q) for every state: propositions of guards on edges reachable from q.
std::vector<PropSet> fv_all(const Tgba &a);
PropSet fv(const Tgba &a, AutState q);

/// SF(q, ac): disjunction of self-loop guards on q whose acceptance set is
/// included in ac.
BoolExpr sf(const Tgba &a, AutState q, AccSet ac);

/// q has no edge to another state and its self-loops jointly carry all of F.
bool is_terminal(const Tgba &a, AutState q);

/// Text format:
///   ap: a b c
///   acc-count: k
///   init: 0
///   states: n            (optional)
///   stutter-invariant: yes|no   (optional)
///   src dst "guard" {i j}
std::string export_automaton(const Tgba &a);
Tgba import_automaton(std::string_view text, PropUniverse &ap);

/// Converts a propositional LTL text to a guard, declaring nothing: every
/// proposition must already exist in `ap`.
BoolExpr parse_guard(std::string_view text, const PropUniverse &ap);

} // namespace hmc
