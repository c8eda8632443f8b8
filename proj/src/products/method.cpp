#include "hybridmc/products/method.hpp"

#include <array>

#include "hybridmc/errors.hpp"

namespace hmc {

namespace {

constexpr std::array<std::pair<Method, const char *>, 8> kNames{{
    {Method::Plain, "product"},
    {Method::Sog, "sog"},
    {Method::Sop, "sop"},
    {Method::Slap, "slap"},
    {Method::SlapFst, "slap-fst"},
    {Method::Bcz, "bcz"},
    {Method::Owcty, "owcty"},
    {Method::El, "el"},
}};

} // namespace

const char *to_string(Method m) {
  for (auto &[k, n] : kNames)
    if (k == m)
      return n;
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "plain")
    return Method::Plain;
  for (auto &[k, n] : kNames)
    if (name == n)
      return k;
  std::string list;
  for (auto &[k, n] : kNames)
    list += (list.empty() ? "" : ", ") + std::string(n);
  throw UsageError("unknown method '" + std::string(name) + "' (expected one of " + list + ")");
}

std::vector<Method> all_methods() {
  std::vector<Method> r;
  for (auto &[k, n] : kNames)
    r.push_back(k);
  return r;
}

bool needs_stutter_invariance(Method m) { return m == Method::Sog || m == Method::Sop; }

bool is_symbolic(Method m) { return m == Method::Owcty || m == Method::El; }

ProductGraph make_product(Method m, const Tgba &a, KripkeModel &k) {
  ProductGraph p;
  switch (m) {
  case Method::Plain:
    p.view = std::make_unique<ModelStates>(k);
    p.graph = std::make_unique<PlainProduct>(a, *p.view);
    break;
  case Method::Sog:
    if (!a.stutter_invariant())
      throw UsageError("SOG requires a stuttering-invariant (X-free) formula");
    p.view = std::make_unique<SogGraph>(k, a.used_props());
    p.graph = std::make_unique<PlainProduct>(a, *p.view);
    break;
  case Method::Sop:
    p.graph = std::make_unique<SopProduct>(a, k);
    break;
  case Method::Slap:
    p.graph = std::make_unique<SlapProduct>(a, k, false);
    break;
  case Method::SlapFst:
    p.graph = std::make_unique<SlapProduct>(a, k, true);
    break;
  case Method::Bcz:
    p.graph = std::make_unique<BczProduct>(a, k);
    break;
  case Method::Owcty:
  case Method::El:
    throw UsageError(std::string("method '") + to_string(m) + "' is symbolic and has no product graph");
  }
  return p;
}

std::optional<ConcreteTrace> concretize(const Tgba &a, KripkeModel &k) {
  ModelStates view(k);
  PlainProduct prod(a, view);
  EmptinessResult r = check_emptiness(prod);
  if (r.verdict == Verdict::Empty)
    return std::nullopt;
  auto convert = [&](const std::vector<LassoStep> &steps) {
    std::vector<ConcreteStep> out;
    for (const LassoStep &s : steps) {
      auto [q, n] = prod.decode(s.state);
      out.push_back({q, view.state(n), view.describe(n), s.acc});
    }
    return out;
  };
  ConcreteTrace t;
  t.prefix = convert(r.lasso->prefix);
  t.cycle = convert(r.lasso->cycle);
  return t;
}

bool validate_trace(const Tgba &a, KripkeModel &k, const ConcreteTrace &t, std::string *why) {
  auto fail = [&](std::string msg) {
    if (why)
      *why = std::move(msg);
    return false;
  };
  if (t.cycle.empty())
    return fail("empty cycle");
  std::vector<const ConcreteStep *> all;
  for (const auto &s : t.prefix)
    all.push_back(&s);
  for (const auto &s : t.cycle)
    all.push_back(&s);
  if (all.front()->q != a.initial() || !(all.front()->state == k.initial()))
    return fail("trace does not start at the initial state");

  auto step_ok = [&](const ConcreteStep &x, const ConcreteStep &y) {
    if ((k.image(x.state) & y.state).is_false())
      return false;
    Bdd here = x.state;
    for (const TgbaEdge &e : a.out(x.q))
      if (e.dst == y.q && e.acc == x.acc && !(here & k.sat(e.guard)).is_false())
        return true;
    return false;
  };
  const std::size_t n = all.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!step_ok(*all[i], *all[i + 1]))
      return fail("no matching edge from " + all[i]->name + " to " + all[i + 1]->name);
  if (!step_ok(t.cycle.back(), t.cycle.front()))
    return fail("cycle does not close at " + t.cycle.front().name);
  AccSet seen;
  for (const auto &s : t.cycle)
    seen |= s.acc;
  if (!a.all_acc().subset_of(seen))
    return fail("cycle misses acceptance conditions: has " + seen.to_string());
  return true;
}

} // namespace hmc
