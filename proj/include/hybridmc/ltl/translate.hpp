/// @file translate.hpp
/// @brief LTL to TGBA translation.

#pragma once

#include "hybridmc/logic/props.hpp"
#include "hybridmc/ltl/formula.hpp"
#include "hybridmc/tgba/tgba.hpp"

namespace hmc::ltl {

/// Boolean expression of a propositional formula. Every proposition must
/// already be declared in `ap`.
BoolExpr to_bool_expr(const Formula &f, const PropUniverse &ap);

/// Declares the propositions of `f` in `ap` (in sorted name order).
void declare_props(const Formula &f, PropUniverse &ap);

/// Tableau translation with one acceptance condition per U/F subformula,
/// followed by ensure_acceptance and prune. Declares unknown propositions.
/// The result is flagged stuttering invariant iff `f` contains no X.
Tgba translate(const Formula &f, PropUniverse &ap);

} // namespace hmc::ltl
