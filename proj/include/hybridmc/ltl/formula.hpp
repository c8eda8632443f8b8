/// @file formula.hpp
/// @brief LTL abstract syntax, parsing and printing.
///
/// Grammar (loosest binding first):
///   implies := or ('->' implies)?
///   or      := and (('||' | '|') and)*
///   and     := binary (('&&' | '&') binary)*
///   binary  := unary (('U' | 'R') binary)?
///   unary   := ('!' | 'X' | 'F' | 'G') unary | atom
///   atom    := 'true' | 'false' | identifier | '(' implies ')'
/// Identifiers match [a-zA-Z_][a-zA-Z0-9_.]*; U, R, X, F, G, true and false
/// are reserved.

#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace hmc::ltl {

enum class Kind {
  Prop,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Release,
  Finally,
  Globally,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  std::string name; // Prop only
  Formula left;     // operand of unary operators
  Formula right;
};

Formula prop(std::string name);
Formula tt();
Formula ff();
Formula lnot(Formula f);
Formula land(Formula a, Formula b);
Formula lor(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula next(Formula f);
Formula until(Formula a, Formula b);
Formula release(Formula a, Formula b);
Formula finally(Formula f);
Formula globally(Formula f);

/// Parses LTL text. Throws ParseError carrying the byte offset of the
/// offending token (the input length for premature end of input).
Formula parse(std::string_view text);

/// Fully parenthesised rendering; parse(to_string(f)) is structurally equal to f.
std::string to_string(const Formula &f);

bool structurally_equal(const Formula &a, const Formula &b);

bool is_unary(Kind k);
bool is_binary(Kind k);

/// True iff no X operator occurs (LTL without next is stuttering invariant).
bool is_syntactically_stutter_invariant(const Formula &f);
bool contains_next(const Formula &f);
/// True iff the formula has no temporal operator.
bool is_propositional(const Formula &f);

std::set<std::string> propositions(const Formula &f);
int depth(const Formula &f);
std::size_t size(const Formula &f);

/// Negation normal form: negations only on propositions, no implications;
/// F and G are kept as primitives.
Formula nnf(const Formula &f);

} // namespace hmc::ltl
