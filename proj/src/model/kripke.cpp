#include "hybridmc/model/kripke.hpp"

#include <algorithm>

#include "hybridmc/errors.hpp"

namespace hmc {

void KripkeModel::allocate_state_vars(std::size_t n) {
  std::vector<VarIndex> cur, next;
  for (std::size_t i = 0; i < n; ++i) {
    VarIndex c = mgr_->new_var();
    VarIndex x = mgr_->new_var();
    cur.push_back(c);
    next.push_back(x);
    pairs_.emplace_back(c, x);
  }
  cur_ = VarSet(*mgr_, cur);
  next_ = VarSet(*mgr_, next);
}

Bdd KripkeModel::image(const Bdd &s) {
  Bdd r = mgr_->bdd_false();
  for (std::size_t t = 0; t < partitions(); ++t)
    r |= image(s, t);
  return r;
}

Bdd KripkeModel::preimage(const Bdd &s) {
  Bdd r = mgr_->bdd_false();
  for (std::size_t t = 0; t < partitions(); ++t)
    r |= preimage(s, t);
  return r;
}

Bdd KripkeModel::sat(const BoolExpr &f) {
  if (f.is_const())
    return f;
  if (auto it = sat_cache_.find(f.id()); it != sat_cache_.end())
    return it->second.second;
  for (VarIndex v : mgr_->support(f)) {
    auto p = ap_->prop_of_var(v);
    if (!p)
      throw UsageError("Boolean expression depends on a non-proposition variable");
    if (!std::binary_search(defined_.begin(), defined_.end(), *p))
      throw UsageError("proposition '" + ap_->name(*p) + "' is not defined by the model");
  }
  if (subst_size_ == 0 && !defined_.empty()) {
    std::vector<std::pair<VarIndex, Bdd>> pairs;
    for (PropId p : defined_)
      pairs.emplace_back(ap_->bdd_var(p), label(p));
    subst_ = mgr_->make_substitution(pairs);
    subst_size_ = pairs.size();
  }
  Bdd r = mgr_->compose(f, subst_);
  sat_cache_.emplace(f.id(), std::pair{f, r});
  return r;
}

BoolExpr KripkeModel::observed_label(const Bdd &states, const PropSet &e) {
  BoolExpr r = ap_->mk_true();
  for (PropId p : e) {
    BoolExpr v = ap_->mk_var(p);
    r &= (states & label(p)).is_false() ? !v : v;
  }
  return r;
}

BoolExpr KripkeModel::state_label(const Bdd &singleton) { return observed_label(singleton, defined_); }

BigCount KripkeModel::count(const Bdd &s) { return mgr_->sat_count(s, cur_); }

void KripkeModel::for_each_state(const Bdd &s, const std::function<bool(const Bdd &)> &visit) {
  auto vars = cur_.vars();
  std::vector<VarIndex> vv(vars.begin(), vars.end());
  mgr_->for_each_minterm(s, cur_, [&](const std::vector<bool> &bits) {
    return visit(mgr_->cube(vv, bits));
  });
}

std::string KripkeModel::describe(const Bdd &singleton) {
  std::string out;
  mgr_->for_each_minterm(singleton, cur_, [&](const std::vector<bool> &bits) {
    out = describe_state(bits);
    return false;
  });
  return out;
}

Bdd KripkeModel::reachable() {
  if (!reachable_)
    reachable_ = reach_f(*this, initial(), mgr_->bdd_true());
  return *reachable_;
}

Bdd succ_f(KripkeModel &m, const Bdd &a, const BoolExpr &f) { return m.image(a) & m.sat(f); }

Bdd reach_f(KripkeModel &m, const Bdd &a, const BoolExpr &f) {
  Bdd filter = m.sat(f);
  Bdd x = a;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t t = 0; t < m.partitions(); ++t) {
      m.manager().check_deadline();
      Bdd y = x | (m.image(x, t) & filter);
      if (!(y == x)) {
        x = std::move(y);
        changed = true;
      }
    }
  }
  return x;
}

Bdd f_succ(KripkeModel &m, const Bdd &a, const BoolExpr &f) { return m.image(a & m.sat(f)); }

Bdd f_reach(KripkeModel &m, const Bdd &a, const BoolExpr &f) {
  Bdd filter = m.sat(f);
  Bdd x = a;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t t = 0; t < m.partitions(); ++t) {
      m.manager().check_deadline();
      Bdd y = x | m.image(x & filter, t);
      if (!(y == x)) {
        x = std::move(y);
        changed = true;
      }
    }
  }
  return x;
}

bool contains_cycle(KripkeModel &m, const Bdd &a) {
  Bdd x = a;
  while (!x.is_false()) {
    m.manager().check_deadline();
    Bdd y = x & m.preimage(x);
    if (y == x)
      break;
    x = std::move(y);
  }
  return !x.is_false();
}

std::vector<ObservedClass> partition_by_observed(KripkeModel &m, const Bdd &a, const PropSet &e) {
  std::vector<ObservedClass> classes;
  if (a.is_false())
    return classes;
  PropUniverse &u = m.ap();
  classes.push_back({u.mk_true(), Assignment(u.size()), a});
  for (PropId p : e) {
    Bdd lp = m.label(p);
    BoolExpr v = u.mk_var(p);
    std::vector<ObservedClass> next;
    for (auto &c : classes) {
      Bdd lo = c.states - lp;
      Bdd hi = c.states & lp;
      if (!lo.is_false())
        next.push_back({c.label & !v, c.values, lo});
      if (!hi.is_false()) {
        ObservedClass h{c.label & v, c.values, hi};
        h.values.set(p, true);
        next.push_back(std::move(h));
      }
    }
    classes = std::move(next);
  }
  return classes;
}

} // namespace hmc
