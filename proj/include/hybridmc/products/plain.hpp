/// @file plain.hpp
/// @brief Synchronized product of a TGBA with an explicit Kripke view, and
/// the symbolic observation graph used as such a view.

#pragma once

#include <optional>

#include "hybridmc/products/common.hpp"

namespace hmc {

/// States (q, s); (q1,s1) -> (q2,s2) iff s1 -> s2 and some edge
/// q1 -(g,ac)-> q2 has lambda(s1) |= g. Successors are listed per automaton
/// edge (in edge order), then per Kripke successor (in the view's order).
class PlainProduct : public LazyGraph {
public:
  PlainProduct(const Tgba &a, ExplicitKripke &k);

  StateId initial() override;
  void successors(StateId s, std::vector<GraphEdge> &out) override;
  [[nodiscard]] unsigned acc_count() const override { return aut_->acc_count(); }
  [[nodiscard]] std::string describe(StateId s) const override;
  [[nodiscard]] ExpansionStats stats() const override;

  [[nodiscard]] std::pair<AutState, ExplicitKripke::Node> decode(StateId s) const;

private:
  const Tgba *aut_;
  ExplicitKripke *ks_;
  StateRegistry<std::uint64_t, std::hash<std::uint64_t>> reg_;
  ExpansionCounter counter_;
  std::vector<ExplicitKripke::Node> succ_buf_;
};

/// Symbolic observation graph over an observed alphabet AP'. Nodes are
/// aggregates (homogeneous on AP', closed under ReachF with their own label)
/// and divergent nodes (one per label, with a self-loop) reached from
/// aggregates that contain a cycle.
class SogGraph : public ExplicitKripke {
public:
  SogGraph(KripkeModel &m, PropSet observed);

  Node initial() override;
  void successors(Node n, std::vector<Node> &out) override;
  bool satisfies(Node n, const BoolExpr &g) override;
  [[nodiscard]] std::string describe(Node n) const override;
  [[nodiscard]] std::size_t node_count() const override { return nodes_.size(); }
  [[nodiscard]] DdManager &manager() const override { return model_->manager(); }

  [[nodiscard]] const AggState &node(Node n) const { return nodes_.at(n).state; }
  [[nodiscard]] const BoolExpr &label(Node n) const { return nodes_.at(n).label; }
  /// Expands every node reachable from the initial one.
  void build_all();

private:
  struct Info {
    AggState state;
    BoolExpr label;
    std::optional<std::vector<Node>> succ;
    std::string name;
  };
  Node intern(AggState s, BoolExpr label);

  KripkeModel *model_;
  PropSet observed_;
  std::vector<Info> nodes_;
  std::unordered_map<AggState, Node, AggStateHash> ids_;
};

/// "{s0,s1}" for small sets, "<n states>" otherwise.
std::string summarize_set(KripkeModel &m, const Bdd &set, std::size_t max_listed = 8);

} // namespace hmc
