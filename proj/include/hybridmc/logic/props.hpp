/// @file props.hpp
/// @brief Atomic propositions, assignments and Boolean formulas over them.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridmc/logic/bdd.hpp"

namespace hmc {

/// Dense index of an atomic proposition within a `PropUniverse`.
struct PropId {
  std::uint32_t index = 0;
  friend auto operator<=>(const PropId &, const PropId &) = default;
};

using PropSet = std::vector<PropId>; // sorted, duplicate free

/// Boolean formula over atomic propositions, as a canonical BDD.
using BoolExpr = Bdd;

/// The set AP of a run. Each proposition owns one BDD variable of the
/// universe's manager; declaration order is the variable order.
class PropUniverse {
public:
  explicit PropUniverse(DdManager &mgr) : mgr_(&mgr) {}

  PropId declare(std::string_view name);
  [[nodiscard]] std::optional<PropId> find(std::string_view name) const;
  [[nodiscard]] PropId lookup(std::string_view name) const;

  [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
  [[nodiscard]] const std::string &name(PropId p) const;
  [[nodiscard]] VarIndex bdd_var(PropId p) const;
  /// Proposition owning a BDD variable, if any.
  [[nodiscard]] std::optional<PropId> prop_of_var(VarIndex v) const;
  [[nodiscard]] PropSet all() const;

  [[nodiscard]] DdManager &manager() const noexcept { return *mgr_; }

  BoolExpr mk_var(PropId p) const;
  BoolExpr mk_true() const { return mgr_->bdd_true(); }
  BoolExpr mk_false() const { return mgr_->bdd_false(); }

  /// FV(f): the propositions `f` depends on.
  [[nodiscard]] PropSet free_vars(const BoolExpr &f) const;

  /// Renders `f` as a disjunction of cubes read off the BDD paths, in the
  /// LTL/guard text syntax ("true", "false", "a && !b || c").
  [[nodiscard]] std::string to_string(const BoolExpr &f) const;

private:
  DdManager *mgr_;
  std::vector<std::string> names_;
  std::vector<VarIndex> vars_;
  std::map<std::string, PropId, std::less<>> by_name_;
  std::map<VarIndex, PropId> by_var_;
};

/// Total assignment rho : AP -> {true,false} over a universe.
class Assignment {
public:
  Assignment() = default;
  explicit Assignment(std::size_t universe_size) : values_(universe_size, false) {}
  explicit Assignment(std::vector<bool> values) : values_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool get(PropId p) const;
  void set(PropId p, bool v);
  [[nodiscard]] const std::vector<bool> &values() const noexcept { return values_; }

  /// rho =_E rho' : agreement on the propositions of E.
  [[nodiscard]] bool equal_on(const Assignment &other, const PropSet &e) const;

  friend bool operator==(const Assignment &, const Assignment &) = default;
  friend auto operator<=>(const Assignment &a, const Assignment &b) {
    return a.values_ <=> b.values_;
  }

private:
  std::vector<bool> values_;
};

/// rho(f). Throws UsageError if `f` depends on a proposition outside rho's
/// universe or on a variable that is not a proposition.
bool eval(const PropUniverse &u, const Assignment &rho, const BoolExpr &f);

bool is_satisfiable(const BoolExpr &f);

/// The minterm over E that holds exactly at rho restricted to E.
BoolExpr assignment_as_expr(const PropUniverse &u, const Assignment &rho, const PropSet &e);

/// True iff some completion of the partial cube `partial` satisfies `f`
/// (propositions outside the cube are existentially quantified).
bool consistent(const BoolExpr &partial, const BoolExpr &f);

PropSet prop_union(const PropSet &a, const PropSet &b);

} // namespace hmc
