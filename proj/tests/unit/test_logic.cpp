#include "doctest.h"

#include <bit>
#include <random>

#include "hybridmc/errors.hpp"
#include "hybridmc/logic/bdd.hpp"
#include "hybridmc/logic/props.hpp"

using namespace hmc;

namespace {

/// Truth table over n <= 6 variables: bit k holds f(valuation k), where
/// variable i is bit i of k.
using Table = std::uint64_t;

Table var_table(unsigned v, unsigned n) {
  Table t = 0;
  for (unsigned k = 0; k < (1u << n); ++k)
    if ((k >> v) & 1u)
      t |= Table{1} << k;
  return t;
}

Table mask(unsigned n) { return n == 6 ? ~Table{0} : ((Table{1} << (1u << n)) - 1); }

struct Pair {
  Bdd b;
  Table t;
};

Pair random_fn(DdManager &m, std::mt19937_64 &rng, unsigned n, int depth) {
  if (depth == 0 || rng() % 4 == 0) {
    unsigned v = rng() % n;
    if (rng() % 2)
      return {m.var(v), var_table(v, n)};
    return {m.nvar(v), ~var_table(v, n) & mask(n)};
  }
  Pair a = random_fn(m, rng, n, depth - 1);
  Pair b = random_fn(m, rng, n, depth - 1);
  switch (rng() % 5) {
  case 0:
    return {a.b & b.b, a.t & b.t};
  case 1:
    return {a.b | b.b, a.t | b.t};
  case 2:
    return {a.b ^ b.b, a.t ^ b.t};
  case 3:
    return {a.b - b.b, a.t & ~b.t};
  default:
    return {!a.b, ~a.t & mask(n)};
  }
}

Table table_of(DdManager &m, const Bdd &f, unsigned n) {
  Table t = 0;
  for (unsigned k = 0; k < (1u << n); ++k)
    if (m.evaluate(f, [&](VarIndex v) { return ((k >> v) & 1u) != 0; }))
      t |= Table{1} << k;
  return t;
}

Table exists_table(Table t, unsigned v, unsigned n) {
  Table r = 0;
  for (unsigned k = 0; k < (1u << n); ++k)
    if ((t >> k) & 1u)
      r |= (Table{1} << (k | (1u << v))) | (Table{1} << (k & ~(1u << v)));
  return r;
}

} // namespace

TEST_CASE("bdd: canonical against truth tables") {
  DdManager m;
  const unsigned n = 6;
  for (unsigned i = 0; i < n; ++i)
    m.new_var();
  std::mt19937_64 rng(7);
  std::vector<Pair> seen;
  for (int iter = 0; iter < 600; ++iter) {
    Pair p = random_fn(m, rng, n, 5);
    CHECK(table_of(m, p.b, n) == p.t);
    for (const auto &q : seen)
      CHECK((q.b == p.b) == (q.t == p.t));
    if (seen.size() < 80)
      seen.push_back(p);
    CHECK(m.sat_count(p.b, VarSet(m, {0, 1, 2, 3, 4, 5})) == std::popcount(p.t));
  }
}

TEST_CASE("bdd: quantification, and_exists, ite") {
  DdManager m;
  const unsigned n = 6;
  for (unsigned i = 0; i < n; ++i)
    m.new_var();
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    Pair f = random_fn(m, rng, n, 4);
    Pair g = random_fn(m, rng, n, 4);
    Pair h = random_fn(m, rng, n, 4);
    std::vector<VarIndex> qs;
    Table ef = f.t, efg = f.t & g.t;
    for (unsigned v = 0; v < n; ++v)
      if (rng() % 3 == 0) {
        qs.push_back(v);
        ef = exists_table(ef, v, n);
        efg = exists_table(efg, v, n);
      }
    VarSet vs(m, qs);
    CHECK(table_of(m, m.exists(f.b, vs), n) == ef);
    CHECK(table_of(m, m.and_exists(f.b, g.b, vs), n) == efg);
    CHECK(table_of(m, m.ite(f.b, g.b, h.b), n) == ((f.t & g.t) | (~f.t & h.t & mask(n))));
    CHECK(f.b.implies(f.b | g.b));
    CHECK((f.b & g.b).implies(f.b));
  }
}

TEST_CASE("bdd: permute and compose") {
  DdManager m;
  for (int i = 0; i < 6; ++i)
    m.new_var();
  // swap-free order-preserving renaming 0->1, 2->3, 4->5
  std::vector<std::pair<VarIndex, VarIndex>> pairs{{0, 1}, {2, 3}, {4, 5}};
  VarMap map = m.make_var_map(pairs);
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 200; ++iter) {
    // functions over vars 0,2,4 only
    Bdd f = m.bdd_false();
    Table t = 0;
    for (unsigned k = 0; k < 8; ++k)
      if (rng() % 2) {
        f |= m.cube(std::vector<VarIndex>{0, 2, 4},
                    std::vector<bool>{(k & 1) != 0, (k & 2) != 0, (k & 4) != 0});
        t |= Table{1} << k;
      }
    Bdd g = m.permute(f, map);
    for (unsigned k = 0; k < 8; ++k) {
      bool expect = (t >> k) & 1u;
      bool got = m.evaluate(g, [&](VarIndex v) {
        if (v == 1)
          return (k & 1) != 0;
        if (v == 3)
          return (k & 2) != 0;
        if (v == 5)
          return (k & 4) != 0;
        return false;
      });
      CHECK(got == expect);
    }
    // compose var 0 := (1 & 3): f[0 := x1 & x3]
    std::vector<std::pair<VarIndex, Bdd>> sub{{0, m.var(1) & m.var(3)}};
    Substitution s = m.make_substitution(sub);
    Bdd h = m.compose(f, s);
    for (unsigned k = 0; k < 64; ++k) {
      auto val = [&](VarIndex v) { return ((k >> v) & 1u) != 0; };
      bool x0 = val(1) && val(3);
      bool expect = m.evaluate(f, [&](VarIndex v) { return v == 0 ? x0 : val(v); });
      CHECK(m.evaluate(h, val) == expect);
    }
  }
}

TEST_CASE("bdd: minterm enumeration order and counts") {
  DdManager m;
  for (int i = 0; i < 4; ++i)
    m.new_var();
  Bdd f = (m.var(0) & m.nvar(2)) | m.var(3);
  VarSet vs(m, {0, 1, 2, 3});
  std::vector<std::vector<bool>> got;
  m.for_each_minterm(f, vs, [&](const std::vector<bool> &v) {
    got.push_back(v);
    return true;
  });
  std::vector<std::vector<bool>> expect;
  for (unsigned k = 0; k < 16; ++k) {
    std::vector<bool> v{(k & 8) != 0, (k & 4) != 0, (k & 2) != 0, (k & 1) != 0};
    if ((v[0] && !v[2]) || v[3])
      expect.push_back(v);
  }
  CHECK(got == expect);
  CHECK(m.sat_count(f, vs) == expect.size());

  BigCount big = m.sat_count(m.bdd_true(), vs);
  CHECK(big == 16);
}

TEST_CASE("bdd: large exact counts") {
  DdManager m;
  std::vector<VarIndex> vars;
  for (int i = 0; i < 200; ++i)
    vars.push_back(m.new_var());
  VarSet vs(m, vars);
  BigCount expect = BigCount(1) << 200;
  CHECK(m.sat_count(m.bdd_true(), vs) == expect);
  CHECK(m.sat_count(m.var(5), vs) == expect / 2);
}

TEST_CASE("bdd: garbage collection keeps live handles intact") {
  DdConfig cfg;
  cfg.gc_threshold = 2000;
  DdManager m(cfg);
  for (int i = 0; i < 16; ++i)
    m.new_var();
  std::mt19937_64 rng(5);
  Pair keep = random_fn(m, rng, 6, 6);
  for (int iter = 0; iter < 2000; ++iter) {
    Bdd junk = m.var(rng() % 16) ^ m.var(rng() % 16) ^ m.var(rng() % 16) ^ m.var(rng() % 16);
    (void)junk;
  }
  m.gc();
  CHECK(m.stats().gc_runs >= 1);
  CHECK(table_of(m, keep.b, 6) == keep.t);
}

TEST_CASE("bdd: node limit raises a resource error") {
  DdConfig cfg;
  cfg.node_limit = 200;
  DdManager m(cfg);
  std::vector<VarIndex> vars;
  for (int i = 0; i < 40; ++i)
    vars.push_back(m.new_var());
  auto build = [&] {
    Bdd f = m.bdd_false();
    for (int i = 0; i < 20; ++i)
      f = f ^ (m.var(i) & m.var(i + 20));
    return f;
  };
  CHECK_THROWS_AS(build(), ResourceError);
}

TEST_CASE("bdd: deadline") {
  DdManager m;
  m.set_deadline(std::chrono::steady_clock::now() - std::chrono::seconds(1));
  CHECK_THROWS_AS(m.check_deadline(), TimeoutError);
  m.set_deadline(std::nullopt);
  CHECK_NOTHROW(m.check_deadline());
}

TEST_CASE("bdd: mixing managers is rejected") {
  DdManager m1, m2;
  m1.new_var();
  m2.new_var();
  CHECK_THROWS_AS((void)(m1.var(0) & m2.var(0)), UsageError);
}

TEST_CASE("props: declaration, evaluation, printing") {
  DdManager m;
  PropUniverse u(m);
  PropId a = u.declare("a"), b = u.declare("b"), c = u.declare("c");
  CHECK(u.declare("a") == a);
  CHECK(u.size() == 3);
  CHECK_THROWS_AS((void)u.lookup("zz"), UsageError);

  BoolExpr f = (u.mk_var(a) & !u.mk_var(b)) | u.mk_var(c);
  for (unsigned k = 0; k < 8; ++k) {
    Assignment rho(3);
    rho.set(a, k & 1);
    rho.set(b, k & 2);
    rho.set(c, k & 4);
    bool expect = ((k & 1) && !(k & 2)) || (k & 4);
    CHECK(eval(u, rho, f) == expect);
  }
  CHECK(u.free_vars(f) == PropSet{a, b, c});
  CHECK(u.free_vars(u.mk_var(b) | u.mk_true()).empty());
  CHECK(u.to_string(u.mk_true()) == "true");
  CHECK(u.to_string(u.mk_false()) == "false");
  CHECK(u.to_string(u.mk_var(a) & !u.mk_var(b)) == "a && !b");

  Assignment rho(3);
  rho.set(a, true);
  BoolExpr cube = assignment_as_expr(u, rho, {a, b});
  CHECK(cube == (u.mk_var(a) & !u.mk_var(b)));
  CHECK(consistent(cube, f));
  CHECK_FALSE(consistent(cube, u.mk_var(b)));
  Assignment other(3);
  other.set(a, true);
  other.set(c, true);
  CHECK(rho.equal_on(other, {a, b}));
  CHECK_FALSE(rho.equal_on(other, {c}));
}

TEST_CASE("props: eval rejects propositions outside the assignment") {
  DdManager m;
  PropUniverse u(m);
  PropId a = u.declare("a");
  PropId b = u.declare("b");
  Assignment small(1);
  CHECK_THROWS_AS(eval(u, small, u.mk_var(b)), UsageError);
  CHECK(eval(u, small, !u.mk_var(a)));
}
