#include "hybridmc/symbolic/symbolic.hpp"

#include <map>
#include <stdexcept>

namespace hmc {

SymbolicProduct::SymbolicProduct(const Tgba &a, KripkeModel &m)
    : aut_(a.acc_count() == 0 ? ensure_acceptance(a) : a), model_(&m) {
  DdManager &mgr = m.manager();
  const std::size_t n = aut_.num_states();
  unsigned bits = 1;
  while ((std::size_t{1} << bits) < n)
    ++bits;
  std::vector<VarIndex> vars;
  for (unsigned i = 0; i < bits; ++i)
    vars.push_back(mgr.new_var());
  aut_vars_ = VarSet(mgr, vars);
  std::vector<VarIndex> all(m.state_vars().vars().begin(), m.state_vars().vars().end());
  all.insert(all.end(), vars.begin(), vars.end());
  all_vars_ = VarSet(mgr, all);

  for (std::size_t q = 0; q < n; ++q) {
    std::vector<bool> v(bits);
    for (unsigned i = 0; i < bits; ++i)
      v[i] = ((q >> (bits - 1 - i)) & 1u) != 0;
    codes_.push_back(mgr.cube(vars, v));
  }

  std::map<std::pair<AutState, AutState>, std::size_t> index;
  for (AutState q = 0; q < n; ++q) {
    for (const TgbaEdge &e : aut_.out(q)) {
      Bdd g = m.sat(e.guard);
      if (g.is_false())
        continue;
      auto [it, fresh] = index.try_emplace({e.src, e.dst}, groups_.size());
      if (fresh)
        groups_.push_back({e.src, e.dst, mgr.bdd_false(),
                           std::vector<Bdd>(aut_.acc_count(), mgr.bdd_false())});
      Group &grp = groups_[it->second];
      grp.any |= g;
      for (unsigned c : e.acc.indices())
        grp.by_cond[c] |= g;
    }
  }
}

Bdd SymbolicProduct::initial() const { return model_->initial() & codes_.at(aut_.initial()); }

Bdd SymbolicProduct::post(const Bdd &x) { return post_impl(x, -1); }
Bdd SymbolicProduct::post(const Bdd &x, unsigned c) { return post_impl(x, static_cast<int>(c)); }
Bdd SymbolicProduct::pre(const Bdd &y) { return pre_impl(y, -1); }
Bdd SymbolicProduct::pre(const Bdd &y, unsigned c) { return pre_impl(y, static_cast<int>(c)); }

Bdd SymbolicProduct::post_impl(const Bdd &x, int c) {
  DdManager &mgr = manager();
  std::vector<std::optional<Bdd>> part(aut_.num_states());
  Bdd r = mgr.bdd_false();
  for (const Group &g : groups_) {
    const Bdd &guard = c < 0 ? g.any : g.by_cond[static_cast<unsigned>(c)];
    if (guard.is_false())
      continue;
    auto &xq = part[g.src];
    if (!xq)
      xq = mgr.exists(x & codes_[g.src], aut_vars_);
    if (xq->is_false())
      continue;
    mgr.check_deadline();
    r |= model_->image(*xq & guard) & codes_[g.dst];
  }
  return r;
}

Bdd SymbolicProduct::pre_impl(const Bdd &y, int c) {
  DdManager &mgr = manager();
  std::vector<std::optional<Bdd>> part(aut_.num_states());
  Bdd r = mgr.bdd_false();
  for (const Group &g : groups_) {
    const Bdd &guard = c < 0 ? g.any : g.by_cond[static_cast<unsigned>(c)];
    if (guard.is_false())
      continue;
    auto &yq = part[g.dst];
    if (!yq)
      yq = mgr.exists(y & codes_[g.dst], aut_vars_);
    if (yq->is_false())
      continue;
    mgr.check_deadline();
    r |= model_->preimage(*yq) & guard & codes_[g.src];
  }
  return r;
}

Bdd SymbolicProduct::reachable() {
  if (!reachable_) {
    Bdd x = initial();
    Bdd frontier = x;
    while (!frontier.is_false()) {
      Bdd next = post(frontier) - x;
      x |= next;
      frontier = std::move(next);
    }
    reachable_ = x;
  }
  return *reachable_;
}

BigCount SymbolicProduct::count(const Bdd &x) { return manager().sat_count(x, all_vars_); }

namespace {

void check_shrinks(const Bdd &now, const Bdd &before) {
  if (!now.implies(before))
    throw std::logic_error("symbolic hull grew between iterations");
}

SymbolicResult finish(SymbolicProduct &p, const Bdd &z, std::size_t iterations) {
  SymbolicResult r;
  r.verdict = z.is_false() ? Verdict::Empty : Verdict::NonEmpty;
  r.outer_iterations = iterations;
  r.peak_nodes = p.manager().stats().peak_nodes;
  r.reachable_states = p.count(p.reachable());
  return r;
}

} // namespace

SymbolicResult owcty(SymbolicProduct &p) {
  const unsigned nacc = p.automaton().acc_count();
  Bdd z = p.reachable();
  std::size_t iterations = 0;
  for (;;) {
    ++iterations;
    Bdd old = z;
    for (unsigned c = 0; c < nacc && !z.is_false(); ++c) {
      // keep what is reachable inside z from a c-edge target
      Bdd y = p.post(z, c) & z;
      for (;;) {
        Bdd y2 = y | (p.post(y) & z);
        if (y2 == y)
          break;
        y = std::move(y2);
      }
      z = std::move(y);
    }
    // drop states without a predecessor in z
    for (;;) {
      Bdd z2 = z & p.post(z);
      if (z2 == z)
        break;
      z = std::move(z2);
    }
    check_shrinks(z, old);
    if (z == old)
      break;
  }
  return finish(p, z, iterations);
}

SymbolicResult el(SymbolicProduct &p) {
  const unsigned nacc = p.automaton().acc_count();
  Bdd z = p.reachable();
  std::size_t iterations = 0;
  for (;;) {
    ++iterations;
    Bdd old = z;
    Bdd next = z & p.pre(z);
    for (unsigned c = 0; c < nacc && !next.is_false(); ++c) {
      // states of z that reach, inside z, the source of a c-edge into z
      Bdd y = z & p.pre(z, c);
      for (;;) {
        Bdd y2 = y | (z & p.pre(y));
        if (y2 == y)
          break;
        y = std::move(y2);
      }
      next &= y;
    }
    z = std::move(next);
    check_shrinks(z, old);
    if (z == old)
      break;
  }
  return finish(p, z, iterations);
}

} // namespace hmc
