#include "hybridmc/products/aggregate.hpp"

#include "hybridmc/errors.hpp"
#include "hybridmc/products/plain.hpp"

namespace hmc {

namespace {

AggState aggregate(AutState q, Bdd set) { return {AggState::Kind::Aggregate, q, std::move(set)}; }
AggState divergent(AutState q, BoolExpr l) { return {AggState::Kind::Divergent, q, std::move(l)}; }

} // namespace

// ---------------------------------------------------------------------------
// AggregateProduct

AggregateProduct::AggregateProduct(const Tgba &a, KripkeModel &m) : aut_(a), model_(&m) {}

StateId AggregateProduct::initial() { return reg_.intern(make_initial()); }

void AggregateProduct::successors(StateId s, std::vector<GraphEdge> &out) {
  out.clear();
  buf_.clear();
  const AggState st = reg_.key(s); // copy: interning below may reallocate
  expand(st, buf_);
  for (auto &[acc, t] : buf_)
    out.push_back({acc, reg_.intern(t)});
  counter_.expanded(s, out.size());
}

std::string AggregateProduct::describe(StateId s) const {
  const AggState &st = reg_.key(s);
  std::string q = "q" + std::to_string(st.q);
  if (st.kind == AggState::Kind::Divergent)
    return "(" + q + ", div[" + model_->ap().to_string(st.set) + "])";
  return "(" + q + ", " + summarize_set(*model_, st.set) + ")";
}

ExpansionStats AggregateProduct::stats() const {
  return counter_.stats(reg_.size(), model_->manager());
}

// ---------------------------------------------------------------------------
// SOP

SopProduct::SopProduct(const Tgba &a, KripkeModel &m) : AggregateProduct(a, m) {
  if (!a.stutter_invariant())
    throw UsageError("SOP requires a stuttering-invariant (X-free) formula");
  fv_ = fv_all(aut_);
}

BoolExpr SopProduct::label_of(const AggState &s) {
  if (s.kind == AggState::Kind::Divergent)
    return s.set;
  return model_->observed_label(s.set, fv_.at(s.q));
}

AggState SopProduct::make_initial() {
  AutState q0 = aut_.initial();
  Bdd s0 = model_->initial();
  return aggregate(q0, reach_f(*model_, s0, model_->observed_label(s0, fv_.at(q0))));
}

void SopProduct::expand(const AggState &s, std::vector<std::pair<AccSet, AggState>> &out) {
  PropUniverse &u = model_->ap();
  const BoolExpr l1 = label_of(s);
  if (s.kind == AggState::Kind::Divergent) {
    for (const TgbaEdge &e : aut_.out(s.q))
      if (consistent(l1, e.guard))
        out.emplace_back(e.acc, divergent(e.dst, restrict_label(u, l1, fv_.at(e.dst))));
    return;
  }
  std::optional<Bdd> fresh;
  std::optional<bool> cyclic;
  for (const TgbaEdge &e : aut_.out(s.q)) {
    if (!consistent(l1, e.guard))
      continue;
    if (!fresh)
      fresh = model_->image(s.set) - s.set;
    for (ObservedClass &c : partition_by_observed(*model_, *fresh, fv_.at(e.dst)))
      out.emplace_back(e.acc, aggregate(e.dst, reach_f(*model_, c.states, c.label)));
    if (!cyclic)
      cyclic = contains_cycle(*model_, s.set);
    if (*cyclic)
      out.emplace_back(e.acc, divergent(e.dst, restrict_label(u, l1, fv_.at(e.dst))));
  }
}

// ---------------------------------------------------------------------------
// SLAP

SlapProduct::SlapProduct(const Tgba &a, KripkeModel &m, bool fst)
    : AggregateProduct(a.acc_count() == 0 ? ensure_acceptance(a) : a, m), fst_(fst) {
  terminal_.resize(aut_.num_states());
  for (AutState q = 0; q < aut_.num_states(); ++q)
    terminal_[q] = is_terminal(aut_, q);
}

AggState SlapProduct::make_initial() {
  AutState q0 = aut_.initial();
  return aggregate(q0, f_reach(*model_, model_->initial(), sf(aut_, q0, AccSet{})));
}

void SlapProduct::expand(const AggState &s, std::vector<std::pair<AccSet, AggState>> &out) {
  if (fst_ && terminal_[s.q]) {
    if (terminal_accepts(s.q, s.set))
      out.emplace_back(aut_.all_acc(), s);
    return;
  }
  for (const TgbaEdge &e : aut_.out(s.q)) {
    if (e.src == e.dst && e.acc.empty())
      continue;
    Bdd step = f_succ(*model_, s.set, e.guard);
    if (step.is_false())
      continue;
    Bdd a2 = f_reach(*model_, step, sf(aut_, e.dst, e.acc));
    out.emplace_back(e.acc, aggregate(e.dst, std::move(a2)));
  }
}

bool SlapProduct::terminal_accepts(AutState q, const Bdd &a) {
  KripkeModel &m = *model_;
  DdManager &mgr = m.manager();
  std::vector<std::pair<Bdd, AccSet>> loops;
  Bdd any = mgr.bdd_false();
  for (const TgbaEdge &e : aut_.out(q)) {
    if (e.dst != q)
      continue;
    Bdd g = m.sat(e.guard);
    loops.emplace_back(g, e.acc);
    any |= g;
  }
  // States with a loop step into x.
  auto pre = [&](const Bdd &x, const Bdd &guards) { return guards & m.preimage(x); };

  Bdd z = f_reach(m, a, sf(aut_, q, aut_.all_acc()));
  for (;;) {
    mgr.check_deadline();
    Bdd old = z;
    z &= pre(z, any);
    for (unsigned c = 0; c < aut_.acc_count() && !z.is_false(); ++c) {
      Bdd gc = mgr.bdd_false();
      for (auto &[g, acc] : loops)
        if (acc.contains(c))
          gc |= g;
      Bdd y = z & pre(z, gc);
      for (;;) {
        mgr.check_deadline();
        Bdd y2 = y | (z & pre(y, any));
        if (y2 == y)
          break;
        y = std::move(y2);
      }
      z &= y;
    }
    if (z == old)
      break;
  }
  return !z.is_false();
}

// ---------------------------------------------------------------------------
// BCZ

BczProduct::BczProduct(const Tgba &a, KripkeModel &m) : AggregateProduct(a, m), used_(a.used_props()) {
  for (PropId p : used_)
    (void)m.label(p);
}

AggState BczProduct::make_initial() { return aggregate(aut_.initial(), model_->initial()); }

void BczProduct::expand(const AggState &s, std::vector<std::pair<AccSet, AggState>> &out) {
  const BoolExpr l = model_->observed_label(s.set, used_);
  std::optional<std::vector<ObservedClass>> classes;
  for (const TgbaEdge &e : aut_.out(s.q)) {
    if (!consistent(l, e.guard))
      continue;
    if (!classes)
      classes = partition_by_observed(*model_, model_->image(s.set), used_);
    for (const ObservedClass &c : *classes)
      out.emplace_back(e.acc, aggregate(e.dst, c.states));
  }
}

} // namespace hmc
