#include "hybridmc/logic/props.hpp"

#include <algorithm>
#include <functional>

#include "hybridmc/errors.hpp"

namespace hmc {

PropId PropUniverse::declare(std::string_view name) {
  if (auto p = find(name))
    return *p;
  if (name.empty())
    throw UsageError("empty proposition name");
  const PropId id{static_cast<std::uint32_t>(names_.size())};
  const VarIndex v = mgr_->new_var();
  names_.emplace_back(name);
  vars_.push_back(v);
  by_name_.emplace(std::string(name), id);
  by_var_.emplace(v, id);
  return id;
}

std::optional<PropId> PropUniverse::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end())
    return std::nullopt;
  return it->second;
}

PropId PropUniverse::lookup(std::string_view name) const {
  if (auto p = find(name))
    return *p;
  throw UsageError("undeclared proposition '" + std::string(name) + "'");
}

const std::string &PropUniverse::name(PropId p) const {
  if (p.index >= names_.size())
    throw UsageError("proposition index out of range");
  return names_[p.index];
}

VarIndex PropUniverse::bdd_var(PropId p) const {
  if (p.index >= vars_.size())
    throw UsageError("proposition index out of range");
  return vars_[p.index];
}

std::optional<PropId> PropUniverse::prop_of_var(VarIndex v) const {
  auto it = by_var_.find(v);
  if (it == by_var_.end())
    return std::nullopt;
  return it->second;
}

PropSet PropUniverse::all() const {
  PropSet out;
  for (std::uint32_t i = 0; i < names_.size(); ++i)
    out.push_back(PropId{i});
  return out;
}

BoolExpr PropUniverse::mk_var(PropId p) const { return mgr_->var(bdd_var(p)); }

PropSet PropUniverse::free_vars(const BoolExpr &f) const {
  PropSet out;
  for (VarIndex v : mgr_->support(f)) {
    auto p = prop_of_var(v);
    if (!p)
      throw UsageError("formula depends on a non-proposition variable");
    out.push_back(*p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string PropUniverse::to_string(const BoolExpr &f) const {
  if (f.is_true())
    return "true";
  if (f.is_false())
    return "false";
  std::vector<std::string> cubes;
  std::vector<std::string> lits;
  std::function<void(const Bdd &)> rec = [&](const Bdd &n) {
    if (n.is_false())
      return;
    if (n.is_true()) {
      std::string c;
      for (std::size_t i = 0; i < lits.size(); ++i)
        c += (i ? " && " : "") + lits[i];
      cubes.push_back(c.empty() ? "true" : c);
      return;
    }
    auto p = prop_of_var(n.var());
    if (!p)
      throw UsageError("formula depends on a non-proposition variable");
    lits.push_back("!" + name(*p));
    rec(n.low());
    lits.back() = name(*p);
    rec(n.high());
    lits.pop_back();
  };
  rec(f);
  std::string out;
  for (std::size_t i = 0; i < cubes.size(); ++i)
    out += (i ? " || " : "") + cubes[i];
  return out;
}

bool Assignment::get(PropId p) const {
  if (p.index >= values_.size())
    throw UsageError("proposition outside the assignment's universe");
  return values_[p.index];
}

void Assignment::set(PropId p, bool v) {
  if (p.index >= values_.size())
    throw UsageError("proposition outside the assignment's universe");
  values_[p.index] = v;
}

bool Assignment::equal_on(const Assignment &other, const PropSet &e) const {
  return std::all_of(e.begin(), e.end(),
                     [&](PropId p) { return get(p) == other.get(p); });
}

bool eval(const PropUniverse &u, const Assignment &rho, const BoolExpr &f) {
  return u.manager().evaluate(f, [&](VarIndex v) {
    auto p = u.prop_of_var(v);
    if (!p)
      throw UsageError("formula depends on a non-proposition variable");
    if (p->index >= rho.size())
      throw UsageError("assignment does not cover proposition '" + u.name(*p) + "'");
    return rho.get(*p);
  });
}

bool is_satisfiable(const BoolExpr &f) { return !f.is_false(); }

BoolExpr assignment_as_expr(const PropUniverse &u, const Assignment &rho, const PropSet &e) {
  std::vector<VarIndex> vars;
  std::vector<bool> values;
  for (PropId p : e) {
    vars.push_back(u.bdd_var(p));
    values.push_back(rho.get(p));
  }
  return u.manager().cube(vars, values);
}

bool consistent(const BoolExpr &partial, const BoolExpr &f) {
  return !(partial & f).is_false();
}

PropSet prop_union(const PropSet &a, const PropSet &b) {
  PropSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

} // namespace hmc
