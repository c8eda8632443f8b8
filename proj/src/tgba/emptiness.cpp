#include "hybridmc/tgba/emptiness.hpp"

#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "hybridmc/errors.hpp"

namespace hmc {

const char *to_string(Verdict v) { return v == Verdict::Empty ? "empty" : "non-empty"; }

namespace {

constexpr std::uint64_t kUnseen = 0;
constexpr std::uint64_t kDead = ~std::uint64_t{0};

struct Root {
  std::uint64_t index;
  AccSet acc;    // conditions seen on edges inside the SCC
  AccSet in_acc; // condition set of the tree edge entering this root
};

struct Frame {
  StateId state;
  AccSet in_acc;
  std::vector<GraphEdge> succ;
  std::size_t next = 0;
};

/// Shortest path inside `scc` from `start` to the target of the first edge
/// accepted by `want`; requires at least one edge.
bool bfs_path(LazyGraph &g, StateId start, const std::unordered_set<StateId> &scc,
              const std::function<bool(StateId, const GraphEdge &)> &want,
              std::vector<LassoStep> &steps, StateId &end) {
  struct Parent {
    StateId from;
    AccSet acc;
  };
  std::unordered_map<StateId, Parent> parent;
  std::deque<StateId> todo{start};
  std::unordered_set<StateId> seen{start};
  std::vector<GraphEdge> succ;
  while (!todo.empty()) {
    StateId u = todo.front();
    todo.pop_front();
    g.successors(u, succ);
    for (const auto &e : succ) {
      if (!scc.contains(e.dst))
        continue;
      if (want(u, e)) {
        std::vector<LassoStep> rev{{u, e.acc}};
        for (StateId w = u; w != start;) {
          const Parent &p = parent.at(w);
          rev.push_back({p.from, p.acc});
          w = p.from;
        }
        steps.insert(steps.end(), rev.rbegin(), rev.rend());
        end = e.dst;
        return true;
      }
      if (seen.insert(e.dst).second) {
        parent.emplace(e.dst, Parent{u, e.acc});
        todo.push_back(e.dst);
      }
    }
  }
  return false;
}

Lasso build_lasso(LazyGraph &g, const std::vector<Frame> &todo,
                  const std::unordered_set<StateId> &scc, AccSet all) {
  Lasso lasso;
  const StateId x = todo.back().state;
  for (std::size_t i = 0; i + 1 < todo.size(); ++i)
    lasso.prefix.push_back({todo[i].state, todo[i + 1].in_acc});

  AccSet covered;
  StateId cur = x;
  while (!all.subset_of(covered)) {
    std::vector<LassoStep> steps;
    StateId end;
    bool ok = bfs_path(
        g, cur, scc, [&](StateId, const GraphEdge &e) { return !(e.acc - covered).empty(); },
        steps, end);
    if (!ok)
      throw std::logic_error("accepting SCC lost its acceptance conditions");
    for (const auto &s : steps)
      covered |= s.acc;
    lasso.cycle.insert(lasso.cycle.end(), steps.begin(), steps.end());
    cur = end;
  }
  if (cur != x || lasso.cycle.empty()) {
    std::vector<LassoStep> steps;
    StateId end;
    bool ok = bfs_path(
        g, cur, scc, [&](StateId, const GraphEdge &e) { return e.dst == x; }, steps, end);
    if (!ok)
      throw std::logic_error("accepting SCC is not strongly connected");
    lasso.cycle.insert(lasso.cycle.end(), steps.begin(), steps.end());
  }
  return lasso;
}

} // namespace

EmptinessResult check_emptiness(LazyGraph &g) {
  EmptinessResult res;
  const AccSet all = AccSet::all(g.acc_count());
  std::vector<std::uint64_t> h; // DFS numbers indexed by StateId
  auto num = [&](StateId s) -> std::uint64_t & {
    if (s >= h.size())
      h.resize(std::size_t{s} + 1 + h.size() / 2, kUnseen);
    return h[s];
  };
  std::uint64_t counter = 0;
  std::vector<Root> roots;
  std::vector<Frame> todo;
  std::vector<StateId> live;

  auto push = [&](StateId s, AccSet in_acc) {
    num(s) = ++counter;
    ++res.states_visited;
    roots.push_back({counter, AccSet(), in_acc});
    live.push_back(s);
    todo.push_back({s, in_acc, {}, 0});
    g.successors(s, todo.back().succ);
  };

  push(g.initial(), AccSet());
  while (!todo.empty()) {
    Frame &top = todo.back();
    if (top.next < top.succ.size()) {
      GraphEdge e = top.succ[top.next++];
      ++res.edges_traversed;
      std::uint64_t hd = num(e.dst);
      if (hd == kUnseen) {
        push(e.dst, e.acc);
        continue;
      }
      if (hd == kDead)
        continue;
      // e closes a cycle: merge every SCC above dst into one.
      AccSet merged = e.acc;
      while (roots.back().index > hd) {
        merged |= roots.back().acc | roots.back().in_acc;
        roots.pop_back();
      }
      roots.back().acc |= merged;
      if (all.subset_of(roots.back().acc)) {
        std::unordered_set<StateId> scc;
        for (auto it = live.rbegin(); it != live.rend(); ++it) {
          if (h[*it] < roots.back().index)
            break;
          scc.insert(*it);
        }
        res.verdict = Verdict::NonEmpty;
        res.lasso = build_lasso(g, todo, scc, all);
        return res;
      }
      continue;
    }
    StateId s = top.state;
    todo.pop_back();
    if (roots.back().index == h[s]) {
      roots.pop_back();
      StateId w;
      do {
        w = live.back();
        live.pop_back();
        h[w] = kDead;
      } while (w != s);
    }
  }
  res.verdict = Verdict::Empty;
  return res;
}

bool validate_lasso(LazyGraph &g, const Lasso &lasso, std::string *why) {
  auto fail = [&](const std::string &msg) {
    if (why)
      *why = msg;
    return false;
  };
  if (lasso.cycle.empty())
    return fail("empty cycle");
  std::vector<GraphEdge> succ;
  auto has_edge = [&](StateId u, AccSet acc, StateId v) {
    g.successors(u, succ);
    for (const auto &e : succ)
      if (e.dst == v && e.acc == acc)
        return true;
    return false;
  };
  StateId start = lasso.prefix.empty() ? lasso.cycle.front().state : lasso.prefix.front().state;
  if (start != g.initial())
    return fail("lasso does not start at the initial state");
  std::vector<LassoStep> path = lasso.prefix;
  path.insert(path.end(), lasso.cycle.begin(), lasso.cycle.end());
  for (std::size_t i = 0; i < path.size(); ++i) {
    StateId next = i + 1 < path.size() ? path[i + 1].state : lasso.cycle.front().state;
    if (!has_edge(path[i].state, path[i].acc, next))
      return fail("missing edge " + g.describe(path[i].state) + " -> " + g.describe(next) +
                  " with acceptance " + path[i].acc.to_string());
  }
  AccSet covered;
  for (const auto &s : lasso.cycle)
    covered |= s.acc;
  if (!AccSet::all(g.acc_count()).subset_of(covered))
    return fail("cycle covers only " + covered.to_string());
  return true;
}

ExpansionStats explore_all(LazyGraph &g) {
  ExpansionStats st;
  std::vector<bool> seen;
  auto mark = [&](StateId s) {
    if (s >= seen.size())
      seen.resize(std::size_t{s} + 1, false);
    if (seen[s])
      return false;
    seen[s] = true;
    return true;
  };
  std::deque<StateId> queue;
  StateId init = g.initial();
  mark(init);
  queue.push_back(init);
  std::vector<GraphEdge> succ;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    ++st.states_created;
    ++st.states_expanded;
    g.successors(s, succ);
    st.edges += succ.size();
    for (const GraphEdge &e : succ)
      if (mark(e.dst))
        queue.push_back(e.dst);
  }
  st.peak_nodes = g.stats().peak_nodes;
  return st;
}

ExplicitGraph::ExplicitGraph(unsigned acc_count, std::vector<std::vector<GraphEdge>> adjacency,
                             StateId init)
    : acc_count_(acc_count), adj_(std::move(adjacency)), init_(init) {
  if (init_ >= adj_.size())
    throw UsageError("initial state out of range");
  for (const auto &v : adj_)
    for (const auto &e : v)
      if (e.dst >= adj_.size())
        throw UsageError("edge target out of range");
  expanded_.assign(adj_.size(), false);
  created_.assign(adj_.size(), false);
}

StateId ExplicitGraph::initial() {
  if (!created_[init_]) {
    created_[init_] = true;
    ++stats_.states_created;
  }
  return init_;
}

void ExplicitGraph::successors(StateId s, std::vector<GraphEdge> &out) {
  out = adj_.at(s);
  if (!expanded_[s]) {
    expanded_[s] = true;
    ++stats_.states_expanded;
    stats_.edges += out.size();
    for (const auto &e : out)
      if (!created_[e.dst]) {
        created_[e.dst] = true;
        ++stats_.states_created;
      }
  }
}

std::string ExplicitGraph::describe(StateId s) const { return std::to_string(s); }

} // namespace hmc
