#include "hybridmc/tgba/tgba.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <tuple>
#include <optional>
#include <sstream>

#include "hybridmc/errors.hpp"
#include "hybridmc/ltl/formula.hpp"
#include "hybridmc/ltl/translate.hpp"

namespace hmc {

AccSet AccSet::all(unsigned n) {
  if (n > 64)
    throw UsageError("at most 64 acceptance conditions are supported");
  return AccSet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
}

AccSet AccSet::single(unsigned i) {
  if (i >= 64)
    throw UsageError("acceptance index out of range");
  return AccSet(std::uint64_t{1} << i);
}

std::vector<unsigned> AccSet::indices() const {
  std::vector<unsigned> out;
  for (unsigned i = 0; i < 64; ++i)
    if (contains(i))
      out.push_back(i);
  return out;
}

std::string AccSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (unsigned i : indices()) {
    if (!first)
      s += ' ';
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

Tgba::Tgba(PropUniverse &ap, unsigned acc_count) : ap_(&ap), acc_count_(acc_count) {
  if (acc_count > 64)
    throw UsageError("at most 64 acceptance conditions are supported");
}

AutState Tgba::add_state(std::string name) {
  out_.emplace_back();
  if (name.empty())
    name = std::to_string(out_.size() - 1);
  names_.push_back(std::move(name));
  return static_cast<AutState>(out_.size() - 1);
}

void Tgba::add_edge(AutState src, AutState dst, BoolExpr guard, AccSet acc) {
  if (src >= out_.size() || dst >= out_.size())
    throw UsageError("edge endpoint out of range");
  if (!acc.subset_of(AccSet::all(acc_count_)))
    throw UsageError("edge acceptance index exceeds acc-count");
  if (guard.is_false())
    return;
  out_[src].push_back({src, dst, std::move(guard), acc});
}

void Tgba::set_initial(AutState q) {
  if (q >= out_.size())
    throw UsageError("initial state out of range");
  initial_ = q;
}

void Tgba::set_acc_count(unsigned n) {
  if (n > 64)
    throw UsageError("at most 64 acceptance conditions are supported");
  acc_count_ = n;
}

const std::vector<TgbaEdge> &Tgba::out(AutState q) const {
  if (q >= out_.size())
    throw UsageError("automaton state out of range");
  return out_[q];
}

std::size_t Tgba::num_edges() const {
  std::size_t n = 0;
  for (const auto &v : out_)
    n += v.size();
  return n;
}

const std::string &Tgba::state_name(AutState q) const {
  if (q >= names_.size())
    throw UsageError("automaton state out of range");
  return names_[q];
}

PropSet Tgba::used_props() const {
  PropSet out;
  for (const auto &v : out_)
    for (const auto &e : v)
      out = prop_union(out, ap_->free_vars(e.guard));
  return out;
}

namespace {

/// Iterative Tarjan; returns the SCC index of every state (unvisited: -1),
/// SCCs numbered in completion order.
std::vector<int> scc_of(const Tgba &a, const std::vector<bool> &alive) {
  const std::size_t n = a.num_states();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<AutState> stack;
  struct Frame {
    AutState q;
    std::size_t next;
  };
  std::vector<Frame> call;
  int counter = 0, ncomp = 0;
  for (AutState root = 0; root < n; ++root) {
    if (!alive[root] || index[root] >= 0)
      continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame &f = call.back();
      const auto &edges = a.out(f.q);
      if (f.next < edges.size()) {
        AutState d = edges[f.next++].dst;
        if (!alive[d])
          continue;
        if (index[d] < 0) {
          index[d] = low[d] = counter++;
          stack.push_back(d);
          on_stack[d] = true;
          call.push_back({d, 0});
        } else if (on_stack[d]) {
          low[f.q] = std::min(low[f.q], index[d]);
        }
        continue;
      }
      AutState q = f.q;
      call.pop_back();
      if (!call.empty())
        low[call.back().q] = std::min(low[call.back().q], low[q]);
      if (low[q] == index[q]) {
        AutState x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack[x] = false;
          comp[x] = ncomp;
        } while (x != q);
        ++ncomp;
      }
    }
  }
  return comp;
}

std::vector<bool> reachable_from(const Tgba &a, AutState q0) {
  std::vector<bool> seen(a.num_states(), false);
  std::deque<AutState> todo{q0};
  seen[q0] = true;
  while (!todo.empty()) {
    AutState q = todo.front();
    todo.pop_front();
    for (const auto &e : a.out(q))
      if (!seen[e.dst]) {
        seen[e.dst] = true;
        todo.push_back(e.dst);
      }
  }
  return seen;
}

} // namespace

Tgba ensure_acceptance(const Tgba &a) {
  if (a.acc_count() > 0)
    return a;
  Tgba r(a.ap(), 1);
  for (AutState q = 0; q < a.num_states(); ++q)
    r.add_state(a.state_name(q));
  r.set_initial(a.initial());
  r.set_stutter_invariant(a.stutter_invariant());

  // colour: 0 white, 1 on the DFS stack, 2 finished
  const std::size_t n = a.num_states();
  std::vector<int> colour(n, 0);
  std::vector<std::vector<bool>> back(n);
  for (AutState q = 0; q < n; ++q)
    back[q].assign(a.out(q).size(), false);
  struct Frame {
    AutState q;
    std::size_t next;
  };
  std::vector<AutState> roots{a.initial()};
  for (AutState q = 0; q < n; ++q)
    roots.push_back(q);
  for (AutState root : roots) {
    if (n == 0 || colour[root] != 0)
      continue;
    std::vector<Frame> call{{root, 0}};
    colour[root] = 1;
    while (!call.empty()) {
      Frame &f = call.back();
      const auto &edges = a.out(f.q);
      if (f.next < edges.size()) {
        std::size_t i = f.next++;
        AutState d = edges[i].dst;
        if (colour[d] == 1) {
          back[f.q][i] = true;
        } else if (colour[d] == 0) {
          colour[d] = 1;
          call.push_back({d, 0});
        }
        continue;
      }
      colour[f.q] = 2;
      call.pop_back();
    }
  }
  for (AutState q = 0; q < n; ++q) {
    const auto &edges = a.out(q);
    for (std::size_t i = 0; i < edges.size(); ++i)
      r.add_edge(q, edges[i].dst, edges[i].guard, back[q][i] ? AccSet::single(0) : AccSet());
  }
  return r;
}

Tgba prune(const Tgba &a) {
  const std::size_t n = a.num_states();
  std::vector<bool> alive = reachable_from(a, a.initial());
  std::vector<int> comp = scc_of(a, alive);
  int ncomp = 0;
  for (int c : comp)
    ncomp = std::max(ncomp, c + 1);

  std::vector<AccSet> comp_acc(ncomp);
  std::vector<bool> comp_has_edge(ncomp, false);
  for (AutState q = 0; q < n; ++q) {
    if (!alive[q])
      continue;
    for (const auto &e : a.out(q))
      if (alive[e.dst] && comp[e.dst] == comp[q]) {
        comp_acc[comp[q]] |= e.acc;
        comp_has_edge[comp[q]] = true;
      }
  }
  const AccSet all = a.all_acc();
  // Useful: can reach an accepting SCC. Tarjan numbers SCCs in reverse
  // topological order, so successors' components are finished first.
  std::vector<bool> comp_useful(ncomp, false);
  for (int c = 0; c < ncomp; ++c)
    comp_useful[c] = comp_has_edge[c] && all.subset_of(comp_acc[c]);
  for (int c = 0; c < ncomp; ++c) {
    if (comp_useful[c])
      continue;
    for (AutState q = 0; q < n && !comp_useful[c]; ++q) {
      if (!alive[q] || comp[q] != c)
        continue;
      for (const auto &e : a.out(q))
        if (alive[e.dst] && comp_useful[comp[e.dst]]) {
          comp_useful[c] = true;
          break;
        }
    }
  }
  std::vector<bool> keep(n, false);
  for (AutState q = 0; q < n; ++q)
    keep[q] = alive[q] && comp_useful[comp[q]];
  keep[a.initial()] = true;

  // BFS renumbering over kept states.
  std::vector<AutState> order;
  std::vector<std::optional<AutState>> renum(n);
  std::deque<AutState> todo{a.initial()};
  renum[a.initial()] = 0;
  order.push_back(a.initial());
  while (!todo.empty()) {
    AutState q = todo.front();
    todo.pop_front();
    for (const auto &e : a.out(q))
      if (keep[e.dst] && !renum[e.dst]) {
        renum[e.dst] = static_cast<AutState>(order.size());
        order.push_back(e.dst);
        todo.push_back(e.dst);
      }
  }
  Tgba r(a.ap(), a.acc_count());
  r.set_stutter_invariant(a.stutter_invariant());
  for (AutState q : order)
    r.add_state(a.state_name(q));
  r.set_initial(0);
  for (AutState q : order)
    for (const auto &e : a.out(q)) {
      if (!keep[e.dst] || !renum[e.dst])
        continue;
      AccSet acc = comp[e.dst] == comp[q] ? e.acc : AccSet();
      r.add_edge(*renum[q], *renum[e.dst], e.guard, acc);
    }
  return r;
}

namespace {

/// Outgoing edges of q with destinations mapped through `cls`, guards of
/// equal (destination, marks) merged and guards covered by a parallel edge
/// with more marks removed. Sorted, so equal signatures compare equal.
std::vector<std::tuple<AutState, std::uint64_t, NodeId, BoolExpr>>
edge_signature(const Tgba &a, AutState q, const std::vector<AutState> &cls) {
  std::map<std::pair<AutState, std::uint64_t>, BoolExpr> merged;
  for (const auto &e : a.out(q)) {
    auto key = std::pair{cls[e.dst], e.acc.bits()};
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(key, e.guard);
    else
      it->second |= e.guard;
  }
  std::vector<std::tuple<AutState, std::uint64_t, NodeId, BoolExpr>> sig;
  for (auto &[key, g] : merged) {
    BoolExpr guard = g;
    for (auto &[other, h] : merged)
      if (other.first == key.first && other.second != key.second &&
          AccSet(key.second).subset_of(AccSet(other.second)))
        guard = guard - h;
    if (!guard.is_false())
      sig.emplace_back(key.first, key.second, guard.id(), guard);
  }
  std::sort(sig.begin(), sig.end(), [](const auto &x, const auto &y) {
    return std::tie(std::get<0>(x), std::get<1>(x), std::get<2>(x)) <
           std::tie(std::get<0>(y), std::get<1>(y), std::get<2>(y));
  });
  return sig;
}

} // namespace

Tgba reduce(const Tgba &a0) {
  Tgba a = prune(a0);
  const std::size_t n = a.num_states();
  std::vector<AutState> cls(n, 0);
  std::size_t ncls = 1;
  for (;;) {
    using Key = std::pair<AutState, std::vector<std::tuple<AutState, std::uint64_t, NodeId>>>;
    std::map<Key, AutState> ids;
    std::vector<AutState> next(n);
    for (AutState q = 0; q < n; ++q) {
      Key k{cls[q], {}};
      for (auto &t : edge_signature(a, q, cls))
        k.second.emplace_back(std::get<0>(t), std::get<1>(t), std::get<2>(t));
      auto [it, fresh] = ids.try_emplace(std::move(k), static_cast<AutState>(ids.size()));
      next[q] = it->second;
    }
    cls = std::move(next);
    if (ids.size() == ncls)
      break;
    ncls = ids.size();
  }

  // Conditions on every remaining edge are always satisfied.
  AccSet everywhere = a.all_acc();
  bool any_edge = false;
  for (AutState q = 0; q < n; ++q)
    for (auto &t : edge_signature(a, q, cls)) {
      everywhere = everywhere & AccSet(std::get<1>(t));
      any_edge = true;
    }
  if (!any_edge)
    everywhere = AccSet();
  std::vector<int> remap(a.acc_count(), -1);
  unsigned kept = 0;
  for (unsigned c = 0; c < a.acc_count(); ++c)
    if (!everywhere.contains(c))
      remap[c] = static_cast<int>(kept++);
  auto translate_acc = [&](AccSet s) {
    AccSet r;
    for (unsigned c : s.indices())
      if (remap[c] >= 0)
        r |= AccSet::single(static_cast<unsigned>(remap[c]));
    return r;
  };

  Tgba r(a.ap(), kept);
  r.set_stutter_invariant(a.stutter_invariant());
  std::vector<AutState> rep(ncls, static_cast<AutState>(n));
  for (AutState q = 0; q < n; ++q)
    if (rep[cls[q]] == n)
      rep[cls[q]] = q;
  for (std::size_t c = 0; c < ncls; ++c)
    r.add_state(a.state_name(rep[c]));
  r.set_initial(cls[a.initial()]);
  for (std::size_t c = 0; c < ncls; ++c)
    for (auto &t : edge_signature(a, rep[c], cls))
      r.add_edge(static_cast<AutState>(c), std::get<0>(t), std::get<3>(t),
                 translate_acc(AccSet(std::get<1>(t))));
  if (kept == 0)
    return prune(ensure_acceptance(r));
  return prune(r);
}

std::vector<PropSet> fv_all(const Tgba &a) {
  std::vector<PropSet> out(a.num_states());
  for (AutState q = 0; q < a.num_states(); ++q) {
    std::vector<bool> seen = reachable_from(a, q);
    PropSet acc;
    for (AutState r = 0; r < a.num_states(); ++r)
      if (seen[r])
        for (const auto &e : a.out(r))
          acc = prop_union(acc, a.ap().free_vars(e.guard));
    out[q] = std::move(acc);
  }
  return out;
}

PropSet fv(const Tgba &a, AutState q) {
  if (q >= a.num_states())
    throw UsageError("automaton state out of range");
  std::vector<bool> seen = reachable_from(a, q);
  PropSet acc;
  for (AutState r = 0; r < a.num_states(); ++r)
    if (seen[r])
      for (const auto &e : a.out(r))
        acc = prop_union(acc, a.ap().free_vars(e.guard));
  return acc;
}

BoolExpr sf(const Tgba &a, AutState q, AccSet ac) {
  BoolExpr r = a.ap().mk_false();
  for (const auto &e : a.out(q))
    if (e.dst == q && e.acc.subset_of(ac))
      r |= e.guard;
  return r;
}

bool is_terminal(const Tgba &a, AutState q) {
  AccSet loops;
  bool has_loop = false;
  for (const auto &e : a.out(q)) {
    if (e.dst != q)
      return false;
    has_loop = true;
    loops |= e.acc;
  }
  return has_loop && a.all_acc().subset_of(loops);
}

std::string export_automaton(const Tgba &a) {
  std::ostringstream os;
  os << "ap:";
  for (PropId p : a.ap().all())
    os << ' ' << a.ap().name(p);
  os << "\nacc-count: " << a.acc_count() << "\ninit: " << a.initial()
     << "\nstates: " << a.num_states()
     << "\nstutter-invariant: " << (a.stutter_invariant() ? "yes" : "no") << '\n';
  for (AutState q = 0; q < a.num_states(); ++q)
    for (const auto &e : a.out(q))
      os << e.src << ' ' << e.dst << " \"" << a.ap().to_string(e.guard) << "\" "
         << e.acc.to_string() << '\n';
  return os.str();
}

BoolExpr parse_guard(std::string_view text, const PropUniverse &ap) {
  ltl::Formula f = ltl::parse(text);
  if (!ltl::is_propositional(f))
    throw ParseError("guard must be propositional: " + std::string(text), 0);
  return ltl::to_bool_expr(f, ap);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_at(std::size_t line, const std::string &msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg, line);
}

unsigned parse_uint(std::string_view s, std::size_t line, const char *what) {
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    fail_at(line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

} // namespace

Tgba import_automaton(std::string_view text, PropUniverse &ap) {
  std::optional<std::vector<std::string>> props;
  std::optional<unsigned> acc_count, init, states;
  bool stutter = false;
  struct RawEdge {
    std::size_t line;
    unsigned src, dst;
    std::string guard;
    std::vector<unsigned> acc;
  };
  std::vector<RawEdge> edges;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#')
      continue;
    std::size_t colon = line.find(':');
    std::size_t quote = line.find('"');
    if (colon != std::string_view::npos && (quote == std::string_view::npos || colon < quote)) {
      std::string_view key = trim(line.substr(0, colon));
      std::string_view val = trim(line.substr(colon + 1));
      if (key == "ap") {
        std::vector<std::string> names;
        std::istringstream is{std::string(val)};
        std::string w;
        while (is >> w)
          names.push_back(w);
        props = std::move(names);
      } else if (key == "acc-count") {
        acc_count = parse_uint(val, lineno, "acc-count");
      } else if (key == "init") {
        init = parse_uint(val, lineno, "init");
      } else if (key == "states") {
        states = parse_uint(val, lineno, "states");
      } else if (key == "stutter-invariant") {
        if (val == "yes")
          stutter = true;
        else if (val == "no")
          stutter = false;
        else
          fail_at(lineno, "stutter-invariant must be yes or no");
      } else {
        fail_at(lineno, "unknown header field '" + std::string(key) + "'");
      }
      continue;
    }
    // src dst "guard" {acc}
    if (quote == std::string_view::npos)
      fail_at(lineno, "expected edge line 'src dst \"guard\" {acc}'");
    std::size_t close = line.find('"', quote + 1);
    if (close == std::string_view::npos)
      fail_at(lineno, "unterminated guard string");
    std::istringstream head{std::string(line.substr(0, quote))};
    std::string s1, s2, extra;
    if (!(head >> s1 >> s2) || (head >> extra))
      fail_at(lineno, "expected source and destination before guard");
    RawEdge e{lineno, parse_uint(s1, lineno, "source state"),
              parse_uint(s2, lineno, "destination state"),
              std::string(line.substr(quote + 1, close - quote - 1)),
              {}};
    std::string_view tail = trim(line.substr(close + 1));
    if (!tail.empty()) {
      if (tail.front() != '{' || tail.back() != '}')
        fail_at(lineno, "acceptance set must be written {i j ...}");
      std::istringstream is{std::string(tail.substr(1, tail.size() - 2))};
      std::string w;
      while (is >> w)
        e.acc.push_back(parse_uint(w, lineno, "acceptance index"));
    }
    edges.push_back(std::move(e));
  }
  if (!props)
    throw ParseError("missing header field 'ap'", lineno);
  if (!acc_count)
    throw ParseError("missing header field 'acc-count'", lineno);
  if (!init)
    throw ParseError("missing header field 'init'", lineno);

  for (const auto &name : *props)
    ap.declare(name);
  unsigned nstates = states.value_or(0);
  nstates = std::max(nstates, *init + 1);
  for (const auto &e : edges) {
    if (states && (e.src >= *states || e.dst >= *states))
      fail_at(e.line, "state index exceeds declared state count");
    nstates = std::max({nstates, e.src + 1, e.dst + 1});
  }
  if (states && *init >= *states)
    throw ParseError("init state exceeds declared state count", lineno);
  if (*acc_count > 64)
    throw ParseError("acc-count exceeds 64", lineno);

  Tgba a(ap, *acc_count);
  for (unsigned q = 0; q < nstates; ++q)
    a.add_state();
  a.set_initial(*init);
  a.set_stutter_invariant(stutter);
  for (const auto &e : edges) {
    BoolExpr g;
    try {
      g = parse_guard(e.guard, ap);
    } catch (const ParseError &err) {
      fail_at(e.line, err.what());
    } catch (const UsageError &err) {
      fail_at(e.line, err.what());
    }
    AccSet acc;
    for (unsigned i : e.acc) {
      if (i >= *acc_count)
        fail_at(e.line, "acceptance index " + std::to_string(i) + " exceeds acc-count");
      acc |= AccSet::single(i);
    }
    a.add_edge(e.src, e.dst, g, acc);
  }
  return a;
}

} // namespace hmc
