#include "hybridmc/ltl/translate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "hybridmc/errors.hpp"

namespace hmc::ltl {

BoolExpr to_bool_expr(const Formula &f, const PropUniverse &ap) {
  switch (f->kind) {
  case Kind::Prop:
    return ap.mk_var(ap.lookup(f->name));
  case Kind::True:
    return ap.mk_true();
  case Kind::False:
    return ap.mk_false();
  case Kind::Not:
    return !to_bool_expr(f->left, ap);
  case Kind::And:
    return to_bool_expr(f->left, ap) & to_bool_expr(f->right, ap);
  case Kind::Or:
    return to_bool_expr(f->left, ap) | to_bool_expr(f->right, ap);
  case Kind::Implies:
    return (!to_bool_expr(f->left, ap)) | to_bool_expr(f->right, ap);
  default:
    throw UsageError("temporal operator in a propositional context: " + to_string(f));
  }
}

void declare_props(const Formula &f, PropUniverse &ap) {
  for (const auto &name : propositions(f))
    ap.declare(name);
}

namespace {

/// Hash-consed NNF subformulas.
struct Entry {
  Kind kind;
  int left = -1;
  int right = -1;
  bool propositional = false;
  BoolExpr bdd;   // when propositional
  int acc = -1;   // U and F subformulas
  std::string text;
};

class Table {
public:
  explicit Table(const PropUniverse &ap) : ap_(ap) {}

  int intern(const Formula &f) {
    std::string key = to_string(f);
    if (auto it = ids_.find(key); it != ids_.end())
      return it->second;
    Entry e;
    e.kind = f->kind;
    if (f->left)
      e.left = intern(f->left);
    if (f->right)
      e.right = intern(f->right);
    e.propositional = is_propositional(f);
    if (e.propositional)
      e.bdd = to_bool_expr(f, ap_);
    if (f->kind == Kind::Until || f->kind == Kind::Finally)
      e.acc = acc_count_++;
    e.text = key;
    entries_.push_back(std::move(e));
    int id = static_cast<int>(entries_.size() - 1);
    ids_.emplace(std::move(key), id);
    return id;
  }

  const Entry &operator[](int id) const { return entries_[id]; }
  unsigned acc_count() const { return acc_count_; }

private:
  const PropUniverse &ap_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> ids_;
  unsigned acc_count_ = 0;
};

using StateSet = std::vector<int>; // sorted, without 'true'

struct Cover {
  BoolExpr guard;
  std::set<int> next;
  AccSet postponed;
};

class Expander {
public:
  explicit Expander(const Table &t) : t_(t) {}

  std::vector<Cover> covers(const StateSet &s, const BoolExpr &top) {
    std::vector<Cover> out;
    expand(std::vector<int>(s.rbegin(), s.rend()), Cover{top, {}, {}}, out);
    return out;
  }

private:
  void expand(std::vector<int> todo, Cover cur, std::vector<Cover> &out) {
    while (!todo.empty()) {
      int id = todo.back();
      todo.pop_back();
      const Entry &e = t_[id];
      if (e.propositional) {
        cur.guard &= e.bdd;
        if (cur.guard.is_false())
          return;
        continue;
      }
      switch (e.kind) {
      case Kind::And:
        todo.push_back(e.right);
        todo.push_back(e.left);
        break;
      case Kind::Or: {
        auto alt = todo;
        alt.push_back(e.right);
        todo.push_back(e.left);
        expand(std::move(alt), cur, out);
        break;
      }
      case Kind::Next:
        if (t_[e.left].kind == Kind::False)
          return;
        if (t_[e.left].kind != Kind::True)
          cur.next.insert(e.left);
        break;
      case Kind::Until:
      case Kind::Finally: {
        // postponed branch: a && X(a U b), with !b when b is propositional
        int b = e.kind == Kind::Until ? e.right : e.left;
        Cover later = cur;
        auto later_todo = todo;
        if (e.kind == Kind::Until)
          later_todo.push_back(e.left);
        later.next.insert(id);
        later.postponed |= AccSet::single(static_cast<unsigned>(e.acc));
        if (t_[b].propositional)
          later.guard &= !t_[b].bdd;
        if (!later.guard.is_false())
          expand(std::move(later_todo), std::move(later), out);
        todo.push_back(b);
        break;
      }
      case Kind::Release: {
        // a R b: (a && b) or (b && X(a R b)), with !a when a is propositional
        Cover later = cur;
        auto later_todo = todo;
        later_todo.push_back(e.right);
        later.next.insert(id);
        if (t_[e.left].propositional)
          later.guard &= !t_[e.left].bdd;
        if (!later.guard.is_false())
          expand(std::move(later_todo), std::move(later), out);
        todo.push_back(e.right);
        todo.push_back(e.left);
        break;
      }
      case Kind::Globally:
        cur.next.insert(id);
        todo.push_back(e.left);
        break;
      default:
        throw UsageError("unexpected node in NNF: " + e.text);
      }
    }
    out.push_back(std::move(cur));
  }

  const Table &t_;
};

std::string state_label(const Table &t, const StateSet &s) {
  if (s.empty())
    return "true";
  std::string r;
  for (int id : s) {
    if (!r.empty())
      r += " && ";
    r += t[id].text;
  }
  return r;
}

} // namespace

Tgba translate(const Formula &f, PropUniverse &ap) {
  declare_props(f, ap);
  Formula n = nnf(f);
  Table table(ap);
  int root = table.intern(n);
  Expander ex(table);

  Tgba raw(ap, table.acc_count());
  raw.set_stutter_invariant(is_syntactically_stutter_invariant(f));
  const AccSet all = AccSet::all(table.acc_count());

  std::map<StateSet, AutState> ids;
  std::deque<StateSet> todo;
  auto state_of = [&](StateSet s) {
    std::erase_if(s, [&](int id) { return table[id].kind == Kind::True; });
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto it = ids.find(s);
    if (it != ids.end())
      return it->second;
    AutState q = raw.add_state(state_label(table, s));
    ids.emplace(s, q);
    todo.push_back(s);
    return q;
  };
  raw.set_initial(state_of({root}));
  while (!todo.empty()) {
    StateSet s = todo.front();
    todo.pop_front();
    AutState q = ids.at(s);
    // merge covers with the same destination and acceptance
    std::vector<std::pair<std::pair<AutState, AccSet>, BoolExpr>> merged;
    for (auto &c : ex.covers(s, ap.mk_true())) {
      AutState d = state_of(StateSet(c.next.begin(), c.next.end()));
      AccSet acc = all - c.postponed;
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const auto &m) { return m.first == std::pair{d, acc}; });
      if (it == merged.end())
        merged.push_back({{d, acc}, c.guard});
      else
        it->second |= c.guard;
    }
    for (auto &[key, guard] : merged)
      raw.add_edge(q, key.first, guard, key.second);
  }
  return reduce(ensure_acceptance(raw));
}

} // namespace hmc::ltl
