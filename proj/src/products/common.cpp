#include "hybridmc/products/common.hpp"

#include <algorithm>

namespace hmc {

ModelStates::ModelStates(KripkeModel &m) : model_(&m) {}

ExplicitKripke::Node ModelStates::intern(const Bdd &singleton) {
  auto it = ids_.find(singleton.id());
  if (it != ids_.end())
    return it->second;
  Node n = static_cast<Node>(states_.size());
  states_.push_back(singleton);
  names_.push_back(model_->describe(singleton));
  ids_.emplace(singleton.id(), n);
  return n;
}

ExplicitKripke::Node ModelStates::initial() { return intern(model_->initial()); }

void ModelStates::successors(Node n, std::vector<Node> &out) {
  out.clear();
  Bdd img = model_->image(states_.at(n));
  model_->for_each_state(img, [&](const Bdd &s) {
    out.push_back(intern(s));
    return true;
  });
}

bool ModelStates::satisfies(Node n, const BoolExpr &g) {
  return !(states_.at(n) & model_->sat(g)).is_false();
}

std::string ModelStates::describe(Node n) const { return names_.at(n); }

VarSet prop_vars(const PropUniverse &u, const PropSet &props) {
  std::vector<VarIndex> vars;
  for (PropId p : props)
    vars.push_back(u.bdd_var(p));
  return VarSet(u.manager(), vars);
}

BoolExpr restrict_label(const PropUniverse &u, const BoolExpr &l, const PropSet &keep) {
  PropSet drop;
  for (PropId p : u.all())
    if (!std::binary_search(keep.begin(), keep.end(), p))
      drop.push_back(p);
  if (drop.empty())
    return l;
  return u.manager().exists(l, prop_vars(u, drop));
}

} // namespace hmc
