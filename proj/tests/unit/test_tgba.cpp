#include "doctest.h"

#include <random>

#include "hybridmc/bench/bench.hpp"
#include "hybridmc/errors.hpp"
#include "hybridmc/ltl/translate.hpp"
#include "hybridmc/tgba/emptiness.hpp"
#include "hybridmc/tgba/tgba.hpp"
#include "support/lasso_words.hpp"

using namespace hmc;

namespace {

struct Env {
  DdManager mgr;
  PropUniverse ap{mgr};
  Env() {
    for (const char *p : {"a", "b", "c"})
      ap.declare(p);
  }
  BoolExpr g(std::string_view text) { return parse_guard(text, ap); }
};

/// Random automaton with n states over a, b, c.
Tgba random_tgba(Env &env, std::mt19937_64 &rng, unsigned n, unsigned acc) {
  Tgba t(env.ap, acc);
  for (unsigned i = 0; i < n; ++i)
    t.add_state();
  const char *guards[] = {"true", "a", "!a", "b", "a && !c", "!b || c", "c"};
  for (unsigned q = 0; q < n; ++q) {
    unsigned k = rng() % 4;
    for (unsigned i = 0; i < k; ++i)
      t.add_edge(q, rng() % n, env.g(guards[rng() % 7]), AccSet(rng() & ((1u << acc) - 1)));
  }
  return t;
}

/// Random ExplicitGraph for the emptiness tests.
ExplicitGraph random_graph(std::mt19937_64 &rng, unsigned n, unsigned acc) {
  std::vector<std::vector<GraphEdge>> adj(n);
  for (unsigned s = 0; s < n; ++s) {
    unsigned k = rng() % 3;
    for (unsigned i = 0; i < k; ++i)
      adj[s].push_back({AccSet(rng() & ((1u << acc) - 1)), static_cast<StateId>(rng() % n)});
  }
  return ExplicitGraph(acc, adj, 0);
}

} // namespace

TEST_CASE("tgba: AccSet basics") {
  AccSet a = AccSet::all(3);
  CHECK(a.count() == 3);
  CHECK(AccSet::single(1).subset_of(a));
  CHECK(!a.subset_of(AccSet::single(1)));
  CHECK((a - AccSet::single(0)).to_string() == "{1 2}");
  CHECK(AccSet().to_string() == "{}");
  CHECK(AccSet::all(0).empty());
}

TEST_CASE("tgba: unsatisfiable guards are dropped") {
  Env env;
  Tgba t(env.ap);
  t.add_state();
  t.add_edge(0, 0, env.g("a && !a"), {});
  CHECK(t.num_edges() == 0);
  CHECK_THROWS_AS(t.add_edge(0, 3, env.g("a"), {}), UsageError);
}

TEST_CASE("tgba: ensure_acceptance puts a mark on every cycle") {
  Env env;
  std::mt19937_64 rng(1);
  for (int round = 0; round < 200; ++round) {
    Tgba t = random_tgba(env, rng, 1 + rng() % 6, 0);
    Tgba u = ensure_acceptance(t);
    REQUIRE(u.acc_count() == 1);
    REQUIRE(u.num_edges() == t.num_edges());
    // Removing marked edges must leave an acyclic reachable graph.
    std::vector<std::vector<AutState>> adj(u.num_states());
    for (AutState q = 0; q < u.num_states(); ++q)
      for (const auto &e : u.out(q))
        if (e.acc.empty())
          adj[q].push_back(e.dst);
    std::vector<int> color(u.num_states(), 0);
    bool cycle = false;
    std::function<void(AutState)> dfs = [&](AutState q) {
      color[q] = 1;
      for (AutState r : adj[q]) {
        if (color[r] == 1)
          cycle = true;
        else if (color[r] == 0)
          dfs(r);
      }
      color[q] = 2;
    };
    dfs(u.initial());
    CHECK(!cycle);
  }
  // Identity when conditions already exist.
  Tgba t(env.ap, 2);
  t.add_state();
  t.add_edge(0, 0, env.g("a"), AccSet::single(1));
  CHECK(export_automaton(ensure_acceptance(t)) == export_automaton(t));
}

TEST_CASE("tgba: prune and reduce preserve the language") {
  Env env;
  std::mt19937_64 rng(2);
  for (int round = 0; round < 300; ++round) {
    Tgba t = random_tgba(env, rng, 1 + rng() % 6, 1 + rng() % 2);
    Tgba p = prune(t);
    Tgba r = reduce(t);
    CHECK(p.num_states() <= t.num_states());
    CHECK(r.num_states() <= p.num_states());
    CHECK(p.initial() == 0);
    for (int k = 0; k < 10; ++k) {
      auto w = testing::random_word(rng, env.ap.size());
      bool acc = testing::automaton_accepts(t, w);
      CHECK(testing::automaton_accepts(p, w) == acc);
      CHECK(testing::automaton_accepts(r, w) == acc);
    }
  }
}

TEST_CASE("tgba: prune keeps the initial state of an empty automaton") {
  Env env;
  Tgba t(env.ap, 1);
  t.add_state();
  t.add_state();
  t.add_edge(0, 1, env.g("a"), {});
  Tgba p = prune(t);
  CHECK(p.num_states() == 1);
  CHECK(p.num_edges() == 0);
}

TEST_CASE("tgba: fv is monotone along edges and sf collects self-loops") {
  Env env;
  std::mt19937_64 rng(3);
  for (int round = 0; round < 100; ++round) {
    Tgba t = random_tgba(env, rng, 1 + rng() % 6, 2);
    auto all = fv_all(t);
    for (AutState q = 0; q < t.num_states(); ++q) {
      CHECK(all[q] == fv(t, q));
      for (const auto &e : t.out(q)) {
        // FV(q) contains FV(dst) and the guard's own propositions.
        CHECK(prop_union(all[q], all[e.dst]) == all[q]);
        CHECK(prop_union(all[q], env.ap.free_vars(e.guard)) == all[q]);
      }
      for (AccSet ac : {AccSet(), AccSet::single(0), AccSet::all(2)}) {
        BoolExpr want = env.mgr.bdd_false();
        for (const auto &e : t.out(q))
          if (e.dst == q && e.acc.subset_of(ac))
            want |= e.guard;
        CHECK(sf(t, q, ac) == want);
      }
    }
  }
}

TEST_CASE("tgba: terminal states") {
  Env env;
  Tgba t(env.ap, 2);
  t.add_state();
  t.add_state();
  t.add_edge(0, 1, env.g("a"), {});
  t.add_edge(1, 1, env.g("b"), AccSet::single(0));
  CHECK(!is_terminal(t, 1));
  t.add_edge(1, 1, env.g("c"), AccSet::single(1));
  CHECK(is_terminal(t, 1));
  CHECK(!is_terminal(t, 0));
}

TEST_CASE("tgba: text format round-trip") {
  Env env;
  std::mt19937_64 rng(4);
  for (int round = 0; round < 50; ++round) {
    Tgba t = random_tgba(env, rng, 1 + rng() % 5, 2);
    std::string text = export_automaton(t);
    DdManager m2;
    PropUniverse ap2(m2);
    Tgba u = import_automaton(text, ap2);
    CHECK(export_automaton(u) == text);
  }
  DdManager m3;
  PropUniverse ap3(m3);
  CHECK_THROWS_AS(import_automaton("ap: a\nacc-count: 1\ninit: 0\n0 0 \"zz\" {0}\n", ap3),
                  ParseError);
  CHECK_THROWS_AS(import_automaton("ap: a\nacc-count: 1\ninit: 0\n0 0 \"a\" {3}\n", ap3),
                  ParseError);
}

TEST_CASE("tgba: emptiness agrees with Tarjan on random graphs") {
  std::mt19937_64 rng(5);
  int nonempty = 0;
  for (int round = 0; round < 2000; ++round) {
    unsigned n = 1 + rng() % 10;
    unsigned acc = rng() % 3;
    ExplicitGraph g1 = random_graph(rng, n, acc);
    ExplicitGraph g2 = g1;
    EmptinessResult r = check_emptiness(g1);
    bool want = testing::oracle_nonempty(g2);
    CHECK((r.verdict == Verdict::NonEmpty) == want);
    if (r.lasso) {
      ExplicitGraph g3 = g2;
      std::string why;
      CHECK_MESSAGE(validate_lasso(g3, *r.lasso, &why), why);
      ++nonempty;
    }
  }
  CHECK(nonempty > 200);
}

TEST_CASE("tgba: lasso validation rejects broken lassos") {
  std::vector<std::vector<GraphEdge>> adj{{{AccSet(), 1}}, {{AccSet::single(0), 0}}};
  ExplicitGraph g(1, adj, 0);
  Lasso ok{{}, {{0, AccSet()}, {1, AccSet::single(0)}}};
  CHECK(validate_lasso(g, ok));
  Lasso wrong_acc{{}, {{0, AccSet()}, {1, AccSet()}}};
  CHECK(!validate_lasso(g, wrong_acc));
  Lasso not_edge{{}, {{0, AccSet()}, {0, AccSet()}}};
  CHECK(!validate_lasso(g, not_edge));
  Lasso empty_cycle{{{0, AccSet()}}, {}};
  std::string why;
  CHECK(!validate_lasso(g, empty_cycle, &why));
  CHECK(!why.empty());
}

TEST_CASE("tgba: translated automata of random formulas survive export and import") {
  FormulaSpec spec;
  spec.props = {"a", "b", "c"};
  spec.seed = 8;
  for (const auto &f : gen_formulas(spec, 40)) {
    DdManager mgr;
    PropUniverse ap(mgr);
    Tgba a = ltl::translate(f, ap);
    DdManager m2;
    PropUniverse ap2(m2);
    Tgba b = import_automaton(export_automaton(a), ap2);
    CHECK(b.stutter_invariant() == a.stutter_invariant());
    CHECK(b.num_edges() == a.num_edges());
  }
}
