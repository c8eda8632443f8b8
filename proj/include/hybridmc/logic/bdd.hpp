/// @file bdd.hpp
/// @brief Hash-consed reduced ordered binary decision diagrams.
///
/// One `DdManager` owns a unique-node table and an operation cache. `Bdd`
/// values are reference-counted handles into a manager; two handles denote
/// the same Boolean function iff their node identifiers are equal.
/// The variable order is the declaration order and is never changed.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hmc {

using NodeId = std::uint32_t;
using VarIndex = std::uint32_t;
using BigCount = boost::multiprecision::cpp_int;

class DdManager;
class VarSet;

/// Handle to a node of a `DdManager`.
class Bdd {
public:
  Bdd() noexcept = default;
  Bdd(const Bdd &other) noexcept;
  Bdd(Bdd &&other) noexcept;
  Bdd &operator=(const Bdd &other) noexcept;
  Bdd &operator=(Bdd &&other) noexcept;
  ~Bdd();

  [[nodiscard]] DdManager *manager() const noexcept { return mgr_; }
  [[nodiscard]] NodeId id() const noexcept { return id_; }
  [[nodiscard]] bool valid() const noexcept { return mgr_ != nullptr; }

  [[nodiscard]] bool is_false() const noexcept { return id_ == 0; }
  [[nodiscard]] bool is_true() const noexcept { return id_ == 1; }
  [[nodiscard]] bool is_const() const noexcept { return id_ <= 1; }

  /// Top variable; only meaningful for non-constant nodes.
  [[nodiscard]] VarIndex var() const;
  [[nodiscard]] Bdd low() const;
  [[nodiscard]] Bdd high() const;

  Bdd operator&(const Bdd &rhs) const;
  Bdd operator|(const Bdd &rhs) const;
  Bdd operator^(const Bdd &rhs) const;
  /// Set difference / and-not.
  Bdd operator-(const Bdd &rhs) const;
  Bdd operator!() const;

  Bdd &operator&=(const Bdd &rhs) { return *this = *this & rhs; }
  Bdd &operator|=(const Bdd &rhs) { return *this = *this | rhs; }
  Bdd &operator-=(const Bdd &rhs) { return *this = *this - rhs; }

  /// True iff `*this` implies `rhs` (subset test).
  [[nodiscard]] bool implies(const Bdd &rhs) const;

  friend bool operator==(const Bdd &a, const Bdd &b) noexcept {
    return a.mgr_ == b.mgr_ && a.id_ == b.id_;
  }

private:
  friend class DdManager;
  Bdd(DdManager *mgr, NodeId id) noexcept;

  DdManager *mgr_ = nullptr;
  NodeId id_ = 0;
};

struct BddHash {
  std::size_t operator()(const Bdd &b) const noexcept {
    return std::hash<NodeId>{}(b.id());
  }
};

/// Sorted set of variables, kept alongside its positive cube.
class VarSet {
public:
  VarSet() = default;
  VarSet(DdManager &mgr, std::vector<VarIndex> vars);

  [[nodiscard]] std::span<const VarIndex> vars() const noexcept { return vars_; }
  [[nodiscard]] std::size_t size() const noexcept { return vars_.size(); }
  [[nodiscard]] const Bdd &cube() const noexcept { return cube_; }
  [[nodiscard]] bool contains(VarIndex v) const;

private:
  std::vector<VarIndex> vars_;
  Bdd cube_;
};

/// Variable renaming registered with a manager (the id keys the cache).
class VarMap {
public:
  VarMap() = default;
  [[nodiscard]] std::uint32_t id() const noexcept { return id_; }

private:
  friend class DdManager;
  explicit VarMap(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

/// Functional substitution var -> Bdd registered with a manager.
class Substitution {
public:
  Substitution() = default;
  [[nodiscard]] std::uint32_t id() const noexcept { return id_; }

private:
  friend class DdManager;
  explicit Substitution(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

struct DdConfig {
  /// Hard ceiling on allocated nodes; 0 means unlimited.
  std::size_t node_limit = 0;
  /// Allocated-node count that triggers the first garbage collection.
  std::size_t gc_threshold = std::size_t{1} << 20;
  std::size_t initial_cache_bits = 18;
  std::size_t max_cache_bits = 24;
};

struct DdStats {
  std::size_t live_nodes = 0;
  std::size_t peak_nodes = 0;
  std::size_t gc_runs = 0;
};

class DdManager {
public:
  explicit DdManager(DdConfig config = {});
  DdManager(const DdManager &) = delete;
  DdManager &operator=(const DdManager &) = delete;
  ~DdManager();

  VarIndex new_var();
  [[nodiscard]] std::size_t var_count() const noexcept { return var_count_; }

  Bdd bdd_false() { return {this, 0}; }
  Bdd bdd_true() { return {this, 1}; }
  Bdd var(VarIndex v);
  Bdd nvar(VarIndex v);

  Bdd apply_and(const Bdd &f, const Bdd &g);
  Bdd apply_or(const Bdd &f, const Bdd &g);
  Bdd apply_xor(const Bdd &f, const Bdd &g);
  Bdd apply_diff(const Bdd &f, const Bdd &g);
  Bdd apply_not(const Bdd &f);
  Bdd ite(const Bdd &f, const Bdd &g, const Bdd &h);

  /// Existential quantification of the variables in `vars`.
  Bdd exists(const Bdd &f, const VarSet &vars);
  /// exists(f & g, vars) without building the conjunction.
  Bdd and_exists(const Bdd &f, const Bdd &g, const VarSet &vars);

  VarMap make_var_map(std::span<const std::pair<VarIndex, VarIndex>> pairs);
  Bdd permute(const Bdd &f, const VarMap &map);

  Substitution make_substitution(std::span<const std::pair<VarIndex, Bdd>> pairs);
  Bdd compose(const Bdd &f, const Substitution &subst);

  /// Conjunction of literals, `values[i]` giving the polarity of `vars[i]`.
  Bdd cube(std::span<const VarIndex> vars, const std::vector<bool> &values);

  /// Exact number of assignments over `vars` satisfying `f`.
  /// Requires support(f) to be a subset of `vars`.
  BigCount sat_count(const Bdd &f, const VarSet &vars);
  std::vector<VarIndex> support(const Bdd &f);
  /// Number of nodes reachable from `f`, terminals included.
  std::size_t node_count(const Bdd &f);

  /// Calls `visit` with each satisfying assignment over `vars`, in
  /// lexicographic order (false before true, variable order). Stops early
  /// when `visit` returns false.
  void for_each_minterm(const Bdd &f, const VarSet &vars,
                        const std::function<bool(const std::vector<bool> &)> &visit);

  /// Evaluates `f` under a total valuation indexed by variable.
  bool evaluate(const Bdd &f, const std::function<bool(VarIndex)> &value);

  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline);
  /// Throws TimeoutError once the deadline has passed.
  void check_deadline() const;

  void gc();
  [[nodiscard]] DdStats stats() const;

private:
  friend class Bdd;

  struct Node {
    VarIndex var;
    NodeId low;
    NodeId high;
    NodeId next;
    std::uint32_t ref;
  };
  struct CacheEntry {
    std::uint32_t op = 0;
    NodeId a = 0, b = 0, c = 0;
    NodeId result = 0;
  };

  static constexpr VarIndex kTerminalVar = 0xFFFFFFFFu;
  static constexpr NodeId kNil = 0xFFFFFFFFu;

  void ref(NodeId n) noexcept { ++nodes_[n].ref; }
  void deref(NodeId n) noexcept { --nodes_[n].ref; }
  void check_same(const Bdd &a) const;
  void maybe_gc();

  [[nodiscard]] VarIndex top(NodeId n) const noexcept { return nodes_[n].var; }
  NodeId mk(VarIndex v, NodeId low, NodeId high);
  void grow_unique();
  void maybe_grow_cache();
  std::size_t cache_slot(std::uint32_t op, NodeId a, NodeId b, NodeId c) const noexcept;
  bool cache_lookup(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId &out) const noexcept;
  void cache_store(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId r) noexcept;

  NodeId and_rec(NodeId f, NodeId g);
  NodeId or_rec(NodeId f, NodeId g);
  NodeId xor_rec(NodeId f, NodeId g);
  NodeId diff_rec(NodeId f, NodeId g);
  NodeId not_rec(NodeId f);
  NodeId ite_rec(NodeId f, NodeId g, NodeId h);
  NodeId exists_rec(NodeId f, NodeId cube);
  NodeId and_exists_rec(NodeId f, NodeId g, NodeId cube);
  NodeId permute_rec(NodeId f, std::uint32_t map_id);
  NodeId compose_rec(NodeId f, std::uint32_t subst_id);

  DdConfig config_;
  std::vector<Node> nodes_;
  std::vector<NodeId> buckets_;
  NodeId free_list_ = kNil;
  std::size_t free_count_ = 0;
  std::size_t gc_threshold_;
  std::size_t peak_ = 2;
  std::size_t gc_runs_ = 0;
  std::size_t alloc_tick_ = 0;

  std::vector<CacheEntry> cache_;
  std::size_t cache_bits_;

  std::size_t var_count_ = 0;
  std::vector<std::vector<VarIndex>> var_maps_;
  std::vector<std::vector<NodeId>> substitutions_;

  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

} // namespace hmc
