/// @file method.hpp
/// @brief Method names, a factory for the explicit and hybrid products, and
/// extraction of concrete counterexamples from the plain product.

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hybridmc/products/aggregate.hpp"
#include "hybridmc/products/plain.hpp"

namespace hmc {

enum class Method { Plain, Sog, Sop, Slap, SlapFst, Bcz, Owcty, El };

/// "product", "sog", "sop", "slap", "slap-fst", "bcz", "owcty", "el"
const char *to_string(Method m);
/// Accepts "plain" as an alias of "product". Throws UsageError for an
/// unknown name.
Method parse_method(std::string_view name);
std::vector<Method> all_methods();
/// Methods that only handle stuttering-invariant formulas.
bool needs_stutter_invariance(Method m);
/// OWCTY and EL run on the symbolic product rather than a LazyGraph.
bool is_symbolic(Method m);

/// A product graph together with whatever it is built on.
struct ProductGraph {
  std::unique_ptr<ExplicitKripke> view; // plain and sog only
  std::unique_ptr<LazyGraph> graph;
};

/// Builds the LazyGraph of a non-symbolic method. The automaton and the
/// model must outlive the result. SOG observes the automaton's propositions.
ProductGraph make_product(Method m, const Tgba &a, KripkeModel &k);

/// One step of a concrete counterexample.
struct ConcreteStep {
  AutState q;
  Bdd state; // singleton
  std::string name;
  AccSet acc; // of the automaton edge taken from this step
};

struct ConcreteTrace {
  std::vector<ConcreteStep> prefix;
  std::vector<ConcreteStep> cycle;
};

/// Runs the plain product and returns an accepting lasso as Kripke states,
/// or nothing when the product is empty.
std::optional<ConcreteTrace> concretize(const Tgba &a, KripkeModel &k);

/// Checks that the trace starts in s0 and q0, that consecutive states are
/// Kripke edges matched by an automaton edge whose guard holds on the
/// source label, and that the cycle closes and visits every condition.
bool validate_trace(const Tgba &a, KripkeModel &k, const ConcreteTrace &t,
                    std::string *why = nullptr);

} // namespace hmc
