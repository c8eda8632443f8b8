#include "hybridmc/logic/bdd.hpp"

#include <algorithm>
#include <cassert>
#include <string>
#include <unordered_map>

#include "hybridmc/errors.hpp"

namespace hmc {

namespace {

enum Op : std::uint32_t {
  kOpAnd = 1,
  kOpOr,
  kOpXor,
  kOpDiff,
  kOpNot,
  kOpIte,
  kOpExists,
  kOpAndExists,
  kOpPermute,
  kOpCompose,
};

inline std::uint64_t mix(std::uint64_t h) noexcept {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) noexcept {
  return mix((std::uint64_t{a} << 42) ^ (std::uint64_t{b} << 21) ^ c ^
             (std::uint64_t{c} << 50));
}

} // namespace

// ---------------------------------------------------------------------------
// Bdd handle

Bdd::Bdd(DdManager *mgr, NodeId id) noexcept : mgr_(mgr), id_(id) {
  if (mgr_ != nullptr)
    mgr_->ref(id_);
}

Bdd::Bdd(const Bdd &other) noexcept : mgr_(other.mgr_), id_(other.id_) {
  if (mgr_ != nullptr)
    mgr_->ref(id_);
}

Bdd::Bdd(Bdd &&other) noexcept : mgr_(other.mgr_), id_(other.id_) {
  other.mgr_ = nullptr;
  other.id_ = 0;
}

Bdd &Bdd::operator=(const Bdd &other) noexcept {
  if (this != &other) {
    if (other.mgr_ != nullptr)
      other.mgr_->ref(other.id_);
    if (mgr_ != nullptr)
      mgr_->deref(id_);
    mgr_ = other.mgr_;
    id_ = other.id_;
  }
  return *this;
}

Bdd &Bdd::operator=(Bdd &&other) noexcept {
  if (this != &other) {
    if (mgr_ != nullptr)
      mgr_->deref(id_);
    mgr_ = other.mgr_;
    id_ = other.id_;
    other.mgr_ = nullptr;
    other.id_ = 0;
  }
  return *this;
}

Bdd::~Bdd() {
  if (mgr_ != nullptr)
    mgr_->deref(id_);
}

VarIndex Bdd::var() const {
  if (mgr_ == nullptr || is_const())
    throw UsageError("var() of a constant or invalid BDD");
  return mgr_->nodes_[id_].var;
}

Bdd Bdd::low() const {
  if (mgr_ == nullptr || is_const())
    throw UsageError("low() of a constant or invalid BDD");
  return {mgr_, mgr_->nodes_[id_].low};
}

Bdd Bdd::high() const {
  if (mgr_ == nullptr || is_const())
    throw UsageError("high() of a constant or invalid BDD");
  return {mgr_, mgr_->nodes_[id_].high};
}

Bdd Bdd::operator&(const Bdd &rhs) const { return mgr_->apply_and(*this, rhs); }
Bdd Bdd::operator|(const Bdd &rhs) const { return mgr_->apply_or(*this, rhs); }
Bdd Bdd::operator^(const Bdd &rhs) const { return mgr_->apply_xor(*this, rhs); }
Bdd Bdd::operator-(const Bdd &rhs) const { return mgr_->apply_diff(*this, rhs); }
Bdd Bdd::operator!() const { return mgr_->apply_not(*this); }

bool Bdd::implies(const Bdd &rhs) const { return (*this - rhs).is_false(); }

// ---------------------------------------------------------------------------
// VarSet

VarSet::VarSet(DdManager &mgr, std::vector<VarIndex> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  cube_ = mgr.cube(vars_, std::vector<bool>(vars_.size(), true));
}

bool VarSet::contains(VarIndex v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

// ---------------------------------------------------------------------------
// DdManager

DdManager::DdManager(DdConfig config)
    : config_(config), gc_threshold_(config.gc_threshold),
      cache_bits_(config.initial_cache_bits) {
  nodes_.reserve(1u << 16);
  nodes_.push_back({kTerminalVar, 0, 0, kNil, 1});
  nodes_.push_back({kTerminalVar, 1, 1, kNil, 1});
  buckets_.assign(1u << 16, kNil);
  cache_.assign(std::size_t{1} << cache_bits_, CacheEntry{});
  if (config_.node_limit != 0 && gc_threshold_ > config_.node_limit)
    gc_threshold_ = config_.node_limit;
}

DdManager::~DdManager() = default;

VarIndex DdManager::new_var() {
  if (var_count_ >= kTerminalVar - 1)
    throw ResourceError("too many BDD variables");
  for (auto &m : var_maps_)
    m.push_back(static_cast<VarIndex>(var_count_));
  for (auto &s : substitutions_)
    s.push_back(kNil);
  return static_cast<VarIndex>(var_count_++);
}

void DdManager::check_same(const Bdd &a) const {
  if (a.manager() != this)
    throw UsageError("BDD operands belong to different managers");
}

Bdd DdManager::var(VarIndex v) {
  if (v >= var_count_)
    throw UsageError("undeclared BDD variable " + std::to_string(v));
  return {this, mk(v, 0, 1)};
}

Bdd DdManager::nvar(VarIndex v) {
  if (v >= var_count_)
    throw UsageError("undeclared BDD variable " + std::to_string(v));
  return {this, mk(v, 1, 0)};
}

void DdManager::set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
  deadline_ = deadline;
}

void DdManager::check_deadline() const {
  if (deadline_ && std::chrono::steady_clock::now() > *deadline_)
    throw TimeoutError();
}

DdStats DdManager::stats() const {
  return {nodes_.size() - free_count_, peak_, gc_runs_};
}

// --- unique table ----------------------------------------------------------

void DdManager::grow_unique() {
  buckets_.assign(buckets_.size() * 2, kNil);
  const std::size_t mask = buckets_.size() - 1;
  for (NodeId i = 2; i < nodes_.size(); ++i) {
    Node &n = nodes_[i];
    if (n.var == kTerminalVar)
      continue; // free slot
    const std::size_t h = hash3(n.var, n.low, n.high) & mask;
    n.next = buckets_[h];
    buckets_[h] = i;
  }
}

NodeId DdManager::mk(VarIndex v, NodeId low, NodeId high) {
  if (low == high)
    return low;
  std::size_t mask = buckets_.size() - 1;
  std::size_t h = hash3(v, low, high) & mask;
  for (NodeId i = buckets_[h]; i != kNil; i = nodes_[i].next) {
    const Node &n = nodes_[i];
    if (n.var == v && n.low == low && n.high == high)
      return i;
  }

  const std::size_t in_use = nodes_.size() - free_count_;
  if (config_.node_limit != 0 && in_use >= config_.node_limit)
    throw ResourceError("BDD node limit of " + std::to_string(config_.node_limit) +
                        " exceeded");
  if ((++alloc_tick_ & 0xFFFF) == 0)
    check_deadline();

  NodeId id;
  if (free_list_ != kNil) {
    id = free_list_;
    free_list_ = nodes_[id].next;
    --free_count_;
    nodes_[id] = {v, low, high, kNil, 0};
  } else {
    id = static_cast<NodeId>(nodes_.size());
    if (id == kNil)
      throw ResourceError("BDD node table exhausted");
    nodes_.push_back({v, low, high, kNil, 0});
  }
  peak_ = std::max(peak_, nodes_.size() - free_count_);

  if (nodes_.size() - free_count_ > buckets_.size()) {
    grow_unique();
    mask = buckets_.size() - 1;
    h = hash3(v, low, high) & mask;
    // grow_unique already linked `id`
    return id;
  }
  nodes_[id].next = buckets_[h];
  buckets_[h] = id;
  return id;
}

void DdManager::maybe_gc() {
  if (nodes_.size() - free_count_ >= gc_threshold_) {
    gc();
    const std::size_t live = nodes_.size() - free_count_;
    gc_threshold_ = std::max(config_.gc_threshold, 2 * live);
    if (config_.node_limit != 0) {
      if (live >= config_.node_limit)
        throw ResourceError("BDD node limit of " + std::to_string(config_.node_limit) +
                            " exceeded");
      gc_threshold_ = std::min(gc_threshold_, config_.node_limit);
    }
  }
  maybe_grow_cache();
}

void DdManager::gc() {
  std::vector<bool> marked(nodes_.size(), false);
  marked[0] = marked[1] = true;
  std::vector<NodeId> stack;
  for (NodeId i = 2; i < nodes_.size(); ++i) {
    if (nodes_[i].ref > 0 && nodes_[i].var != kTerminalVar && !marked[i]) {
      stack.push_back(i);
      marked[i] = true;
      while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        for (NodeId c : {nodes_[n].low, nodes_[n].high}) {
          if (!marked[c]) {
            marked[c] = true;
            stack.push_back(c);
          }
        }
      }
    }
  }
  std::fill(buckets_.begin(), buckets_.end(), kNil);
  free_list_ = kNil;
  free_count_ = 0;
  const std::size_t mask = buckets_.size() - 1;
  for (NodeId i = static_cast<NodeId>(nodes_.size()) - 1; i >= 2; --i) {
    Node &n = nodes_[i];
    if (marked[i]) {
      const std::size_t h = hash3(n.var, n.low, n.high) & mask;
      n.next = buckets_[h];
      buckets_[h] = i;
    } else {
      n = {kTerminalVar, 0, 0, free_list_, 0};
      free_list_ = i;
      ++free_count_;
    }
  }
  std::fill(cache_.begin(), cache_.end(), CacheEntry{});
  ++gc_runs_;
}

// --- cache -----------------------------------------------------------------

void DdManager::maybe_grow_cache() {
  const std::size_t in_use = nodes_.size() - free_count_;
  if (cache_bits_ < config_.max_cache_bits && in_use > cache_.size()) {
    while (cache_bits_ < config_.max_cache_bits &&
           (std::size_t{1} << cache_bits_) < in_use)
      ++cache_bits_;
    cache_.assign(std::size_t{1} << cache_bits_, CacheEntry{});
  }
}

std::size_t DdManager::cache_slot(std::uint32_t op, NodeId a, NodeId b,
                                  NodeId c) const noexcept {
  return mix(hash3(a, b, c) + op * 0x9e3779b97f4a7c15ULL) & (cache_.size() - 1);
}

bool DdManager::cache_lookup(std::uint32_t op, NodeId a, NodeId b, NodeId c,
                             NodeId &out) const noexcept {
  const CacheEntry &e = cache_[cache_slot(op, a, b, c)];
  if (e.op == op && e.a == a && e.b == b && e.c == c) {
    out = e.result;
    return true;
  }
  return false;
}

void DdManager::cache_store(std::uint32_t op, NodeId a, NodeId b, NodeId c,
                            NodeId r) noexcept {
  cache_[cache_slot(op, a, b, c)] = {op, a, b, c, r};
}

// --- Boolean operators -----------------------------------------------------

NodeId DdManager::and_rec(NodeId f, NodeId g) {
  if (f == 0 || g == 0)
    return 0;
  if (f == 1)
    return g;
  if (g == 1 || f == g)
    return f;
  if (f > g)
    std::swap(f, g);
  NodeId r;
  if (cache_lookup(kOpAnd, f, g, 0, r))
    return r;
  const VarIndex vf = top(f), vg = top(g);
  const VarIndex v = std::min(vf, vg);
  const NodeId f0 = vf == v ? nodes_[f].low : f, f1 = vf == v ? nodes_[f].high : f;
  const NodeId g0 = vg == v ? nodes_[g].low : g, g1 = vg == v ? nodes_[g].high : g;
  const NodeId lo = and_rec(f0, g0);
  const NodeId hi = and_rec(f1, g1);
  r = mk(v, lo, hi);
  cache_store(kOpAnd, f, g, 0, r);
  return r;
}

NodeId DdManager::or_rec(NodeId f, NodeId g) {
  if (f == 1 || g == 1)
    return 1;
  if (f == 0)
    return g;
  if (g == 0 || f == g)
    return f;
  if (f > g)
    std::swap(f, g);
  NodeId r;
  if (cache_lookup(kOpOr, f, g, 0, r))
    return r;
  const VarIndex vf = top(f), vg = top(g);
  const VarIndex v = std::min(vf, vg);
  const NodeId f0 = vf == v ? nodes_[f].low : f, f1 = vf == v ? nodes_[f].high : f;
  const NodeId g0 = vg == v ? nodes_[g].low : g, g1 = vg == v ? nodes_[g].high : g;
  const NodeId lo = or_rec(f0, g0);
  const NodeId hi = or_rec(f1, g1);
  r = mk(v, lo, hi);
  cache_store(kOpOr, f, g, 0, r);
  return r;
}

NodeId DdManager::xor_rec(NodeId f, NodeId g) {
  if (f == g)
    return 0;
  if (f == 0)
    return g;
  if (g == 0)
    return f;
  if (f == 1)
    return not_rec(g);
  if (g == 1)
    return not_rec(f);
  if (f > g)
    std::swap(f, g);
  NodeId r;
  if (cache_lookup(kOpXor, f, g, 0, r))
    return r;
  const VarIndex vf = top(f), vg = top(g);
  const VarIndex v = std::min(vf, vg);
  const NodeId f0 = vf == v ? nodes_[f].low : f, f1 = vf == v ? nodes_[f].high : f;
  const NodeId g0 = vg == v ? nodes_[g].low : g, g1 = vg == v ? nodes_[g].high : g;
  const NodeId lo = xor_rec(f0, g0);
  const NodeId hi = xor_rec(f1, g1);
  r = mk(v, lo, hi);
  cache_store(kOpXor, f, g, 0, r);
  return r;
}

NodeId DdManager::diff_rec(NodeId f, NodeId g) {
  if (f == 0 || g == 1 || f == g)
    return 0;
  if (g == 0)
    return f;
  if (f == 1)
    return not_rec(g);
  NodeId r;
  if (cache_lookup(kOpDiff, f, g, 0, r))
    return r;
  const VarIndex vf = top(f), vg = top(g);
  const VarIndex v = std::min(vf, vg);
  const NodeId f0 = vf == v ? nodes_[f].low : f, f1 = vf == v ? nodes_[f].high : f;
  const NodeId g0 = vg == v ? nodes_[g].low : g, g1 = vg == v ? nodes_[g].high : g;
  const NodeId lo = diff_rec(f0, g0);
  const NodeId hi = diff_rec(f1, g1);
  r = mk(v, lo, hi);
  cache_store(kOpDiff, f, g, 0, r);
  return r;
}

NodeId DdManager::not_rec(NodeId f) {
  if (f <= 1)
    return f ^ 1u;
  NodeId r;
  if (cache_lookup(kOpNot, f, 0, 0, r))
    return r;
  const VarIndex v = top(f);
  const NodeId f0 = nodes_[f].low, f1 = nodes_[f].high;
  const NodeId lo = not_rec(f0);
  const NodeId hi = not_rec(f1);
  r = mk(v, lo, hi);
  cache_store(kOpNot, f, 0, 0, r);
  return r;
}

NodeId DdManager::ite_rec(NodeId f, NodeId g, NodeId h) {
  if (f == 1)
    return g;
  if (f == 0)
    return h;
  if (g == h)
    return g;
  if (g == 1 && h == 0)
    return f;
  if (g == 0 && h == 1)
    return not_rec(f);
  if (g == 1)
    return or_rec(f, h);
  if (h == 0)
    return and_rec(f, g);
  if (g == 0)
    return diff_rec(h, f);
  NodeId r;
  if (cache_lookup(kOpIte, f, g, h, r))
    return r;
  const VarIndex v = std::min({top(f), top(g), top(h)});
  auto split = [&](NodeId n, NodeId &lo, NodeId &hi) {
    if (top(n) == v) {
      lo = nodes_[n].low;
      hi = nodes_[n].high;
    } else {
      lo = hi = n;
    }
  };
  NodeId f0, f1, g0, g1, h0, h1;
  split(f, f0, f1);
  split(g, g0, g1);
  split(h, h0, h1);
  const NodeId lo = ite_rec(f0, g0, h0);
  const NodeId hi = ite_rec(f1, g1, h1);
  r = mk(v, lo, hi);
  cache_store(kOpIte, f, g, h, r);
  return r;
}

NodeId DdManager::exists_rec(NodeId f, NodeId cube) {
  if (f <= 1 || cube == 1)
    return f;
  const VarIndex vf = top(f);
  while (cube != 1 && top(cube) < vf)
    cube = nodes_[cube].high;
  if (cube == 1)
    return f;
  NodeId r;
  if (cache_lookup(kOpExists, f, cube, 0, r))
    return r;
  const NodeId f0 = nodes_[f].low, f1 = nodes_[f].high;
  if (top(cube) == vf) {
    const NodeId next = nodes_[cube].high;
    const NodeId lo = exists_rec(f0, next);
    if (lo == 1) {
      r = 1;
    } else {
      const NodeId hi = exists_rec(f1, next);
      r = or_rec(lo, hi);
    }
  } else {
    const NodeId lo = exists_rec(f0, cube);
    const NodeId hi = exists_rec(f1, cube);
    r = mk(vf, lo, hi);
  }
  cache_store(kOpExists, f, cube, 0, r);
  return r;
}

NodeId DdManager::and_exists_rec(NodeId f, NodeId g, NodeId cube) {
  if (f == 0 || g == 0)
    return 0;
  if (f == 1 && g == 1)
    return 1;
  if (f == 1)
    return exists_rec(g, cube);
  if (g == 1 || f == g)
    return exists_rec(f, cube);
  if (cube == 1)
    return and_rec(f, g);
  if (f > g)
    std::swap(f, g);
  const VarIndex vf = top(f), vg = top(g);
  const VarIndex v = std::min(vf, vg);
  while (cube != 1 && top(cube) < v)
    cube = nodes_[cube].high;
  if (cube == 1)
    return and_rec(f, g);
  NodeId r;
  if (cache_lookup(kOpAndExists, f, g, cube, r))
    return r;
  const NodeId f0 = vf == v ? nodes_[f].low : f, f1 = vf == v ? nodes_[f].high : f;
  const NodeId g0 = vg == v ? nodes_[g].low : g, g1 = vg == v ? nodes_[g].high : g;
  if (top(cube) == v) {
    const NodeId next = nodes_[cube].high;
    const NodeId lo = and_exists_rec(f0, g0, next);
    if (lo == 1) {
      r = 1;
    } else {
      const NodeId hi = and_exists_rec(f1, g1, next);
      r = or_rec(lo, hi);
    }
  } else {
    const NodeId lo = and_exists_rec(f0, g0, cube);
    const NodeId hi = and_exists_rec(f1, g1, cube);
    r = mk(v, lo, hi);
  }
  cache_store(kOpAndExists, f, g, cube, r);
  return r;
}

NodeId DdManager::permute_rec(NodeId f, std::uint32_t map_id) {
  if (f <= 1)
    return f;
  NodeId r;
  if (cache_lookup(kOpPermute, f, map_id, 0, r))
    return r;
  const VarIndex v = top(f);
  const NodeId f0 = nodes_[f].low, f1 = nodes_[f].high;
  const NodeId lo = permute_rec(f0, map_id);
  const NodeId hi = permute_rec(f1, map_id);
  const VarIndex nv = var_maps_[map_id][v];
  if (nv < top(lo) && nv < top(hi)) {
    r = mk(nv, lo, hi);
  } else {
    const NodeId x = mk(nv, 0, 1);
    r = ite_rec(x, hi, lo);
  }
  cache_store(kOpPermute, f, map_id, 0, r);
  return r;
}

NodeId DdManager::compose_rec(NodeId f, std::uint32_t subst_id) {
  if (f <= 1)
    return f;
  NodeId r;
  if (cache_lookup(kOpCompose, f, subst_id, 0, r))
    return r;
  const VarIndex v = top(f);
  const NodeId f0 = nodes_[f].low, f1 = nodes_[f].high;
  const NodeId lo = compose_rec(f0, subst_id);
  const NodeId hi = compose_rec(f1, subst_id);
  const NodeId s = substitutions_[subst_id][v];
  if (s == kNil) {
    if (v < top(lo) && v < top(hi))
      r = mk(v, lo, hi);
    else
      r = ite_rec(mk(v, 0, 1), hi, lo);
  } else {
    r = ite_rec(s, hi, lo);
  }
  cache_store(kOpCompose, f, subst_id, 0, r);
  return r;
}

// --- public wrappers -------------------------------------------------------

Bdd DdManager::apply_and(const Bdd &f, const Bdd &g) {
  check_same(f);
  check_same(g);
  maybe_gc();
  return {this, and_rec(f.id(), g.id())};
}

Bdd DdManager::apply_or(const Bdd &f, const Bdd &g) {
  check_same(f);
  check_same(g);
  maybe_gc();
  return {this, or_rec(f.id(), g.id())};
}

Bdd DdManager::apply_xor(const Bdd &f, const Bdd &g) {
  check_same(f);
  check_same(g);
  maybe_gc();
  return {this, xor_rec(f.id(), g.id())};
}

Bdd DdManager::apply_diff(const Bdd &f, const Bdd &g) {
  check_same(f);
  check_same(g);
  maybe_gc();
  return {this, diff_rec(f.id(), g.id())};
}

Bdd DdManager::apply_not(const Bdd &f) {
  check_same(f);
  maybe_gc();
  return {this, not_rec(f.id())};
}

Bdd DdManager::ite(const Bdd &f, const Bdd &g, const Bdd &h) {
  check_same(f);
  check_same(g);
  check_same(h);
  maybe_gc();
  return {this, ite_rec(f.id(), g.id(), h.id())};
}

Bdd DdManager::exists(const Bdd &f, const VarSet &vars) {
  check_same(f);
  maybe_gc();
  return {this, exists_rec(f.id(), vars.cube().id())};
}

Bdd DdManager::and_exists(const Bdd &f, const Bdd &g, const VarSet &vars) {
  check_same(f);
  check_same(g);
  maybe_gc();
  return {this, and_exists_rec(f.id(), g.id(), vars.cube().id())};
}

VarMap DdManager::make_var_map(std::span<const std::pair<VarIndex, VarIndex>> pairs) {
  std::vector<VarIndex> m(var_count_);
  for (VarIndex v = 0; v < var_count_; ++v)
    m[v] = v;
  for (auto [from, to] : pairs) {
    if (from >= var_count_ || to >= var_count_)
      throw UsageError("variable map refers to an undeclared variable");
    m[from] = to;
  }
  var_maps_.push_back(std::move(m));
  return VarMap(static_cast<std::uint32_t>(var_maps_.size() - 1));
}

Bdd DdManager::permute(const Bdd &f, const VarMap &map) {
  check_same(f);
  if (map.id() >= var_maps_.size())
    throw UsageError("unknown variable map");
  maybe_gc();
  return {this, permute_rec(f.id(), map.id())};
}

Substitution DdManager::make_substitution(std::span<const std::pair<VarIndex, Bdd>> pairs) {
  std::vector<NodeId> s(var_count_, kNil);
  for (const auto &[v, g] : pairs) {
    check_same(g);
    if (v >= var_count_)
      throw UsageError("substitution refers to an undeclared variable");
    s[v] = g.id();
    ref(g.id()); // held for the manager's lifetime
  }
  substitutions_.push_back(std::move(s));
  return Substitution(static_cast<std::uint32_t>(substitutions_.size() - 1));
}

Bdd DdManager::compose(const Bdd &f, const Substitution &subst) {
  check_same(f);
  if (subst.id() >= substitutions_.size())
    throw UsageError("unknown substitution");
  maybe_gc();
  return {this, compose_rec(f.id(), subst.id())};
}

Bdd DdManager::cube(std::span<const VarIndex> vars, const std::vector<bool> &values) {
  if (vars.size() != values.size())
    throw UsageError("cube: size mismatch");
  std::vector<std::size_t> order(vars.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return vars[a] > vars[b]; });
  maybe_gc();
  NodeId r = 1;
  VarIndex last = kTerminalVar;
  for (std::size_t i : order) {
    if (vars[i] >= var_count_)
      throw UsageError("cube refers to an undeclared variable");
    if (vars[i] == last)
      throw UsageError("cube repeats a variable");
    last = vars[i];
    r = values[i] ? mk(vars[i], 0, r) : mk(vars[i], r, 0);
  }
  return {this, r};
}

BigCount DdManager::sat_count(const Bdd &f, const VarSet &vars) {
  check_same(f);
  const auto vs = vars.vars();
  std::unordered_map<VarIndex, std::size_t> pos;
  for (std::size_t i = 0; i < vs.size(); ++i)
    pos.emplace(vs[i], i);
  const std::size_t n = vs.size();
  auto level = [&](NodeId id) -> std::size_t {
    if (id <= 1)
      return n;
    auto it = pos.find(top(id));
    if (it == pos.end())
      throw UsageError("sat_count: function depends on a variable outside the set");
    return it->second;
  };
  std::unordered_map<NodeId, BigCount> memo;
  std::function<BigCount(NodeId)> rec = [&](NodeId id) -> BigCount {
    if (id == 0)
      return 0;
    if (id == 1)
      return 1;
    if (auto it = memo.find(id); it != memo.end())
      return it->second;
    const std::size_t l = level(id);
    const NodeId lo = nodes_[id].low, hi = nodes_[id].high;
    BigCount c0 = rec(lo), c1 = rec(hi);
    c0 <<= (level(lo) - l - 1);
    c1 <<= (level(hi) - l - 1);
    BigCount r = c0 + c1;
    memo.emplace(id, r);
    return r;
  };
  BigCount r = rec(f.id());
  r <<= level(f.id());
  return r;
}

std::vector<VarIndex> DdManager::support(const Bdd &f) {
  check_same(f);
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<bool> vars(var_count_, false);
  std::vector<NodeId> stack{f.id()};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (n <= 1 || seen[n])
      continue;
    seen[n] = true;
    vars[top(n)] = true;
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  std::vector<VarIndex> out;
  for (VarIndex v = 0; v < var_count_; ++v)
    if (vars[v])
      out.push_back(v);
  return out;
}

std::size_t DdManager::node_count(const Bdd &f) {
  check_same(f);
  std::unordered_map<NodeId, bool> seen;
  std::vector<NodeId> stack{f.id()};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (!seen.emplace(n, true).second || n <= 1)
      continue;
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  return seen.size();
}

void DdManager::for_each_minterm(const Bdd &f, const VarSet &vars,
                                 const std::function<bool(const std::vector<bool> &)> &visit) {
  check_same(f);
  const auto vs = vars.vars();
  std::vector<bool> values(vs.size(), false);
  bool stop = false;
  std::function<void(NodeId, std::size_t)> rec = [&](NodeId n, std::size_t i) {
    if (stop || n == 0)
      return;
    if (i == vs.size()) {
      if (n != 1)
        throw UsageError("for_each_minterm: function depends on a variable outside the set");
      if (!visit(values))
        stop = true;
      return;
    }
    if (n != 1 && top(n) < vs[i])
      throw UsageError("for_each_minterm: function depends on a variable outside the set");
    NodeId lo = n, hi = n;
    if (n != 1 && top(n) == vs[i]) {
      lo = nodes_[n].low;
      hi = nodes_[n].high;
    }
    values[i] = false;
    rec(lo, i + 1);
    values[i] = true;
    rec(hi, i + 1);
    values[i] = false;
  };
  rec(f.id(), 0);
}

bool DdManager::evaluate(const Bdd &f, const std::function<bool(VarIndex)> &value) {
  check_same(f);
  NodeId n = f.id();
  while (n > 1)
    n = value(top(n)) ? nodes_[n].high : nodes_[n].low;
  return n == 1;
}

} // namespace hmc
