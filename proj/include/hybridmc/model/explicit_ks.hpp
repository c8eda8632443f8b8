/// @file explicit_ks.hpp
/// @brief Kripke structures given by an explicit state list.
///
/// Text format (one item per line, '#' starts a comment):
///   ap: a b c
///   state <id> <bits>      bits is one 0/1 digit per proposition, in ap order
///   edge <src> <dst>
///   init <id>

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hybridmc/model/kripke.hpp"

namespace hmc {

struct ExplicitKsData {
  std::vector<std::string> ap;
  /// labels[s][i]: value of ap[i] in state s
  std::vector<std::vector<bool>> labels;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t init = 0;

  /// Successor lists sorted by target id, duplicates removed.
  [[nodiscard]] std::vector<std::vector<std::uint32_t>> adjacency() const;
  /// Throws ModelError on inconsistent data.
  void validate() const;
};

ExplicitKsData parse_explicit_ks(std::string_view text);
std::string format_explicit_ks(const ExplicitKsData &data);

/// States are encoded in binary, most significant bit first, so the
/// enumeration order of a set is the numeric order of state ids.
class ExplicitKs : public KripkeModel {
public:
  ExplicitKs(DdManager &mgr, PropUniverse &ap, ExplicitKsData data);

  [[nodiscard]] Bdd initial() const override { return init_; }
  [[nodiscard]] std::size_t partitions() const override { return 1; }
  Bdd image(const Bdd &s, std::size_t t) override;
  Bdd preimage(const Bdd &s, std::size_t t) override;
  using KripkeModel::image;
  using KripkeModel::preimage;
  [[nodiscard]] Bdd label(PropId p) const override;
  [[nodiscard]] std::string describe_state(const std::vector<bool> &bits) const override;

  [[nodiscard]] const ExplicitKsData &data() const noexcept { return data_; }
  [[nodiscard]] std::size_t num_states() const noexcept { return data_.labels.size(); }

  /// Singleton set {s}.
  [[nodiscard]] Bdd state(std::uint32_t s) const;
  /// Set of the given ids.
  [[nodiscard]] Bdd states(const std::vector<std::uint32_t> &ids) const;
  /// Ids in a set, ascending.
  [[nodiscard]] std::vector<std::uint32_t> ids(const Bdd &set) const;

private:
  [[nodiscard]] Bdd encode(std::uint32_t s, bool next) const;

  ExplicitKsData data_;
  std::size_t bits_ = 1;
  Bdd init_;
  Bdd rel_;
  VarMap to_cur_, to_next_;
  std::vector<std::pair<PropId, Bdd>> labels_;
};

} // namespace hmc
