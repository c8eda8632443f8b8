#include "hybridmc/products/plain.hpp"

#include "hybridmc/errors.hpp"

namespace hmc {

namespace {

std::uint64_t pack(AutState q, ExplicitKripke::Node n) {
  return (std::uint64_t{q} << 32) | std::uint64_t{n};
}

} // namespace

std::string summarize_set(KripkeModel &m, const Bdd &set, std::size_t max_listed) {
  BigCount n = m.count(set);
  if (n > max_listed)
    return "<" + n.str() + " states>";
  std::string out = "{";
  bool first = true;
  m.for_each_state(set, [&](const Bdd &s) {
    if (!first)
      out += ",";
    first = false;
    out += m.describe(s);
    return true;
  });
  return out + "}";
}

// ---------------------------------------------------------------------------
// PlainProduct

PlainProduct::PlainProduct(const Tgba &a, ExplicitKripke &k) : aut_(&a), ks_(&k) {}

StateId PlainProduct::initial() { return reg_.intern(pack(aut_->initial(), ks_->initial())); }

void PlainProduct::successors(StateId s, std::vector<GraphEdge> &out) {
  out.clear();
  auto [q, n] = decode(s);
  bool have_succ = false;
  for (const TgbaEdge &e : aut_->out(q)) {
    if (!ks_->satisfies(n, e.guard))
      continue;
    if (!have_succ) {
      ks_->successors(n, succ_buf_);
      have_succ = true;
    }
    for (ExplicitKripke::Node m : succ_buf_)
      out.push_back({e.acc, reg_.intern(pack(e.dst, m))});
  }
  counter_.expanded(s, out.size());
}

std::pair<AutState, ExplicitKripke::Node> PlainProduct::decode(StateId s) const {
  std::uint64_t k = reg_.key(s);
  return {static_cast<AutState>(k >> 32), static_cast<ExplicitKripke::Node>(k & 0xffffffffu)};
}

std::string PlainProduct::describe(StateId s) const {
  auto [q, n] = decode(s);
  return "(q" + std::to_string(q) + ", " + ks_->describe(n) + ")";
}

ExpansionStats PlainProduct::stats() const { return counter_.stats(reg_.size(), ks_->manager()); }

// ---------------------------------------------------------------------------
// SogGraph

SogGraph::SogGraph(KripkeModel &m, PropSet observed) : model_(&m), observed_(std::move(observed)) {
  for (PropId p : observed_)
    (void)m.label(p); // reject propositions the model cannot evaluate
}

ExplicitKripke::Node SogGraph::intern(AggState s, BoolExpr label) {
  auto it = ids_.find(s);
  if (it != ids_.end())
    return it->second;
  Node n = static_cast<Node>(nodes_.size());
  Info info{s, label, std::nullopt, {}};
  const std::string lab = model_->ap().to_string(label);
  if (s.kind == AggState::Kind::Aggregate)
    info.name = summarize_set(*model_, s.set) + " [" + lab + "]";
  else
    info.name = "div[" + lab + "]";
  nodes_.push_back(std::move(info));
  ids_.emplace(std::move(s), n);
  return n;
}

ExplicitKripke::Node SogGraph::initial() {
  Bdd s0 = model_->initial();
  BoolExpr l0 = model_->observed_label(s0, observed_);
  return intern({AggState::Kind::Aggregate, 0, reach_f(*model_, s0, l0)}, l0);
}

void SogGraph::successors(Node n, std::vector<Node> &out) {
  if (!nodes_.at(n).succ) {
    std::vector<Node> succ;
    const AggState st = nodes_[n].state;
    const BoolExpr label = nodes_[n].label;
    if (st.kind == AggState::Kind::Divergent) {
      succ.push_back(n);
    } else {
      Bdd fresh = model_->image(st.set) & !st.set;
      for (ObservedClass &c : partition_by_observed(*model_, fresh, observed_)) {
        Bdd a = reach_f(*model_, c.states, c.label);
        succ.push_back(intern({AggState::Kind::Aggregate, 0, a}, c.label));
      }
      if (contains_cycle(*model_, st.set))
        succ.push_back(intern({AggState::Kind::Divergent, 0, label}, label));
    }
    nodes_[n].succ = std::move(succ);
  }
  out = *nodes_[n].succ;
}

bool SogGraph::satisfies(Node n, const BoolExpr &g) { return consistent(nodes_.at(n).label, g); }

std::string SogGraph::describe(Node n) const { return nodes_.at(n).name; }

void SogGraph::build_all() {
  std::vector<Node> todo{initial()};
  std::vector<bool> seen;
  std::vector<Node> succ;
  while (!todo.empty()) {
    Node n = todo.back();
    todo.pop_back();
    if (n < seen.size() && seen[n])
      continue;
    if (n >= seen.size())
      seen.resize(std::size_t{n} + 1, false);
    seen[n] = true;
    successors(n, succ);
    for (Node m : succ)
      if (m >= seen.size() || !seen[m])
        todo.push_back(m);
  }
}

} // namespace hmc
