/// @file petri.hpp
/// @brief Bounded place/transition nets as symbolic Kripke structures.
///
/// Text format (one item per line, '#' starts a comment):
///   place <name> bound <k> init <m>
///   trans <name> in <place[:weight] ...> out <place[:weight] ...>
///   prop <name> := <predicate>
/// Predicates combine comparisons `place = c`, `place >= c`, `place <= c`
/// with `!`, `&&`, `||`, parentheses, `true` and `false`.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hybridmc/model/kripke.hpp"

namespace hmc {

struct PetriPlace {
  std::string name;
  unsigned bound = 1;
  unsigned init = 0;
};

struct PetriArc {
  std::size_t place;
  unsigned weight;
};

struct PetriTransition {
  std::string name;
  std::vector<PetriArc> in;
  std::vector<PetriArc> out;
};

struct PetriProp {
  std::string name;
  std::string predicate;
};

struct PetriNet {
  std::vector<PetriPlace> places;
  std::vector<PetriTransition> transitions;
  std::vector<PetriProp> props;

  [[nodiscard]] std::size_t place_index(std::string_view name) const;
  std::size_t add_place(std::string name, unsigned bound, unsigned init);
  void add_transition(std::string name, std::vector<std::pair<std::string, unsigned>> in,
                      std::vector<std::pair<std::string, unsigned>> out);
  void add_prop(std::string name, std::string predicate);
  /// Throws ModelError on inconsistent data.
  void validate() const;
};

PetriNet parse_petri(std::string_view text);
std::string format_petri(const PetriNet &net);

/// One relation partition per transition, in declaration order. Every image
/// checks that no marking exceeds a declared place bound.
class PetriNetKs : public KripkeModel {
public:
  PetriNetKs(DdManager &mgr, PropUniverse &ap, PetriNet net);

  [[nodiscard]] Bdd initial() const override { return init_; }
  [[nodiscard]] std::size_t partitions() const override { return trans_.size(); }
  Bdd image(const Bdd &s, std::size_t t) override;
  Bdd preimage(const Bdd &s, std::size_t t) override;
  using KripkeModel::image;
  using KripkeModel::preimage;
  [[nodiscard]] Bdd label(PropId p) const override;
  [[nodiscard]] std::string describe_state(const std::vector<bool> &bits) const override;

  [[nodiscard]] const PetriNet &net() const noexcept { return net_; }
  /// Markings satisfying a predicate in the text syntax.
  [[nodiscard]] Bdd predicate(std::string_view text) const;
  /// {m} for an explicit marking.
  [[nodiscard]] Bdd marking(const std::vector<unsigned> &m) const;
  /// Decodes a minterm over state_vars().
  [[nodiscard]] std::vector<unsigned> decode(const std::vector<bool> &bits) const;

private:
  struct Rel {
    Bdd relation;
    Bdd overflow;
    VarSet cur;
    VarSet next;
    VarMap to_cur;
    VarMap to_next;
  };

  [[nodiscard]] Bdd value(std::size_t place, unsigned v, bool next) const;
  [[nodiscard]] Bdd compare(std::size_t place, const std::string &op, unsigned c) const;

  PetriNet net_;
  /// per place: offsets into var_pairs(), most significant bit first
  std::vector<std::vector<std::size_t>> place_bits_;
  Bdd init_;
  std::vector<Rel> trans_;
  std::vector<std::pair<PropId, Bdd>> labels_;
};

} // namespace hmc
