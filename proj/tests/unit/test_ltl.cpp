#include "doctest.h"

#include <random>

#include "hybridmc/bench/bench.hpp"
#include "hybridmc/errors.hpp"
#include "hybridmc/ltl/formula.hpp"
#include "hybridmc/ltl/translate.hpp"
#include "support/lasso_words.hpp"

using namespace hmc;

namespace {

std::size_t error_offset(std::string_view text) {
  try {
    ltl::parse(text);
  } catch (const ParseError &e) {
    return e.position();
  }
  FAIL("no parse error for '" << text << "'");
  return 0;
}

} // namespace

TEST_CASE("ltl: precedence and associativity") {
  using namespace ltl;
  CHECK(to_string(parse("a && b || c")) == to_string(lor(land(prop("a"), prop("b")), prop("c"))));
  CHECK(to_string(parse("a -> b -> c")) ==
        to_string(implies(prop("a"), implies(prop("b"), prop("c")))));
  CHECK(to_string(parse("a U b U c")) == to_string(until(prop("a"), until(prop("b"), prop("c")))));
  CHECK(to_string(parse("!a U b")) == to_string(until(lnot(prop("a")), prop("b"))));
  CHECK(to_string(parse("F G a & X b")) ==
        to_string(land(finally(globally(prop("a"))), next(prop("b")))));
  CHECK(to_string(parse("a R b && c")) == to_string(land(release(prop("a"), prop("b")), prop("c"))));
  CHECK(structurally_equal(parse("a | b"), parse("a || b")));
  CHECK(structurally_equal(parse("(((a)))"), prop("a")));
  CHECK(parse("true")->kind == Kind::True);
  CHECK(parse("false")->kind == Kind::False);
  CHECK(parse("Fa")->kind == Kind::Prop); // one identifier, not F applied to a
  CHECK(parse("p.1_x")->name == "p.1_x");
}

TEST_CASE("ltl: error offsets") {
  CHECK(error_offset("") == 0);
  CHECK(error_offset("a &&") == 4);
  CHECK(error_offset("a b") == 2);
  CHECK(error_offset("(a || b") == 7);
  CHECK(error_offset("a ) b") == 2);
  CHECK(error_offset("G U a") == 2);
  CHECK(error_offset("a # b") == 2);
  CHECK(error_offset("X") == 1);
}

TEST_CASE("ltl: printing round-trips on random formulas") {
  FormulaSpec spec;
  spec.kind = FormulaKind::RandomWithX;
  spec.props = {"a", "b", "c"};
  spec.depth = 6;
  spec.seed = 3;
  for (const auto &f : gen_formulas(spec, 300)) {
    auto g = ltl::parse(ltl::to_string(f));
    CHECK(ltl::structurally_equal(f, g));
    CHECK(ltl::to_string(g) == ltl::to_string(f));
  }
}

TEST_CASE("ltl: syntactic queries") {
  auto f = ltl::parse("G (a -> F b) && X c");
  CHECK(ltl::contains_next(f));
  CHECK(!ltl::is_syntactically_stutter_invariant(f));
  CHECK(ltl::propositions(f) == std::set<std::string>{"a", "b", "c"});
  CHECK(ltl::depth(f) == 4);
  CHECK(ltl::is_propositional(ltl::parse("a && !(b || c)")));
  CHECK(!ltl::is_propositional(ltl::parse("a U b")));
  CHECK(ltl::size(ltl::parse("a U b")) == 3);
}

TEST_CASE("ltl: nnf preserves semantics on lasso words") {
  DdManager mgr;
  PropUniverse ap(mgr);
  for (const char *p : {"a", "b", "c"})
    ap.declare(p);
  FormulaSpec spec;
  spec.kind = FormulaKind::RandomWithX;
  spec.props = {"a", "b", "c"};
  spec.depth = 5;
  spec.seed = 11;
  std::mt19937_64 rng(5);
  for (const auto &f : gen_formulas(spec, 200)) {
    auto g = ltl::nnf(f);
    std::function<bool(const ltl::Formula &)> ok = [&](const ltl::Formula &h) -> bool {
      if (h->kind == ltl::Kind::Implies)
        return false;
      if (h->kind == ltl::Kind::Not)
        return h->left->kind == ltl::Kind::Prop;
      return (!h->left || ok(h->left)) && (!h->right || ok(h->right));
    };
    CHECK(ok(g));
    for (int k = 0; k < 5; ++k) {
      auto w = testing::random_word(rng, ap.size());
      CHECK(testing::word_satisfies(f, w, ap) == testing::word_satisfies(g, w, ap));
    }
  }
}

TEST_CASE("ltl: the oracle itself on hand-made words") {
  DdManager mgr;
  PropUniverse ap(mgr);
  ap.declare("a");
  ap.declare("b");
  // a a (b)^omega
  testing::LassoWord w;
  w.letters = {Assignment(std::vector<bool>{true, false}), Assignment(std::vector<bool>{true, false}),
               Assignment(std::vector<bool>{false, true})};
  w.loop = 2;
  CHECK(testing::word_satisfies(ltl::parse("a U b"), w, ap));
  CHECK(testing::word_satisfies(ltl::parse("F G b"), w, ap));
  CHECK(!testing::word_satisfies(ltl::parse("G F a"), w, ap));
  CHECK(testing::word_satisfies(ltl::parse("X X b"), w, ap));
  CHECK(testing::word_satisfies(ltl::parse("b R (a || b)"), w, ap));
  CHECK(!testing::word_satisfies(ltl::parse("G a"), w, ap));
}

TEST_CASE("ltl: small translations") {
  DdManager mgr;
  PropUniverse ap(mgr);
  auto aub = ltl::translate(ltl::parse("a U b"), ap);
  CHECK(aub.num_states() == 2);
  CHECK(aub.acc_count() == 1);
  CHECK(aub.stutter_invariant());
  auto tt = ltl::translate(ltl::parse("true"), ap);
  CHECK(tt.num_states() == 1);
  CHECK(tt.acc_count() == 1); // ensure_acceptance marks the self-loop
  auto ff = ltl::translate(ltl::parse("false"), ap);
  CHECK(ff.num_edges() == 0);
  auto gfa = ltl::translate(ltl::parse("G F a && G F b"), ap);
  CHECK(gfa.acc_count() == 2);
  CHECK(!ltl::translate(ltl::parse("X a"), ap).stutter_invariant());
}

TEST_CASE("ltl: translation agrees with word semantics") {
  for (auto kind : {FormulaKind::Random, FormulaKind::RandomWithX, FormulaKind::Fairness}) {
    DdManager mgr;
    PropUniverse ap(mgr);
    for (const char *p : {"a", "b", "c"})
      ap.declare(p);
    FormulaSpec spec;
    spec.kind = kind;
    spec.props = {"a", "b", "c"};
    spec.depth = 4;
    spec.seed = 21;
    std::mt19937_64 rng(9);
    for (const auto &f : gen_formulas(spec, 120)) {
      Tgba a = ltl::translate(f, ap);
      Tgba n = ltl::translate(ltl::lnot(f), ap);
      for (int k = 0; k < 12; ++k) {
        auto w = testing::random_word(rng, ap.size());
        bool sat = testing::word_satisfies(f, w, ap);
        INFO(ltl::to_string(f));
        CHECK(testing::automaton_accepts(a, w) == sat);
        CHECK(testing::automaton_accepts(n, w) == !sat);
      }
    }
  }
}

TEST_CASE("ltl: to_bool_expr requires declared propositions") {
  DdManager mgr;
  PropUniverse ap(mgr);
  ap.declare("a");
  CHECK_THROWS_AS(ltl::to_bool_expr(ltl::parse("a && z"), ap), UsageError);
  CHECK_THROWS_AS(ltl::to_bool_expr(ltl::parse("F a"), ap), UsageError);
  CHECK(ltl::to_bool_expr(ltl::parse("a || !a"), ap).is_true());
}
