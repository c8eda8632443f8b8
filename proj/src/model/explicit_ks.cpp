#include "hybridmc/model/explicit_ks.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "hybridmc/errors.hpp"

namespace hmc {

namespace {

/// Set of bit strings (most significant bit on vars[0]) given sorted codes.
Bdd build_set(DdManager &m, const std::vector<std::uint64_t> &codes, std::size_t lo,
              std::size_t hi, const std::vector<VarIndex> &vars, std::size_t level) {
  if (lo == hi)
    return m.bdd_false();
  if (level == vars.size())
    return m.bdd_true();
  const std::uint64_t bit = std::uint64_t{1} << (vars.size() - 1 - level);
  std::size_t mid = lo;
  while (mid < hi && (codes[mid] & bit) == 0)
    ++mid;
  Bdd low = build_set(m, codes, lo, mid, vars, level + 1);
  Bdd high = build_set(m, codes, mid, hi, vars, level + 1);
  return m.ite(m.var(vars[level]), high, low);
}

Bdd set_of_codes(DdManager &m, std::vector<std::uint64_t> codes, const std::vector<VarIndex> &vars) {
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return build_set(m, codes, 0, codes.size(), vars, 0);
}

std::uint64_t interleave(std::uint32_t s, std::uint32_t t, std::size_t bits) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < bits; ++i) {
    std::size_t from = bits - 1 - i; // most significant first
    r = (r << 1) | ((s >> from) & 1u);
    r = (r << 1) | ((t >> from) & 1u);
  }
  return r;
}

std::uint32_t parse_id(std::string_view s, std::size_t line) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError("line " + std::to_string(line) + ": invalid state id '" + std::string(s) + "'",
                     line);
  return v;
}

} // namespace

std::vector<std::vector<std::uint32_t>> ExplicitKsData::adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(labels.size());
  for (auto [s, t] : edges)
    adj.at(s).push_back(t);
  for (auto &v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return adj;
}

void ExplicitKsData::validate() const {
  if (labels.empty())
    throw ModelError("Kripke structure has no states");
  if (init >= labels.size())
    throw ModelError("initial state " + std::to_string(init) + " is not declared");
  for (std::size_t s = 0; s < labels.size(); ++s)
    if (labels[s].size() != ap.size())
      throw ModelError("state " + std::to_string(s) + " has a label of the wrong width");
  for (auto [s, t] : edges)
    if (s >= labels.size() || t >= labels.size())
      throw ModelError("edge " + std::to_string(s) + " -> " + std::to_string(t) +
                       " refers to an undeclared state");
}

ExplicitKsData parse_explicit_ks(std::string_view text) {
  ExplicitKsData d;
  bool have_ap = false, have_init = false;
  std::vector<bool> declared;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  auto fail = [&](const std::string &msg) -> void {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg, lineno);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw))
      continue;
    if (kw == "ap:") {
      std::string name;
      while (ls >> name)
        d.ap.push_back(name);
      have_ap = true;
    } else if (kw == "state") {
      std::string id, bits, extra;
      if (!(ls >> id))
        fail("expected 'state <id> <bits>'");
      ls >> bits;
      if (ls >> extra)
        fail("trailing text after state bits");
      if (!have_ap)
        fail("'ap:' must precede states");
      std::uint32_t s = parse_id(id, lineno);
      if (bits.size() != d.ap.size())
        fail("state " + id + " needs " + std::to_string(d.ap.size()) + " label bits");
      std::vector<bool> lab;
      for (char c : bits) {
        if (c != '0' && c != '1')
          fail("label bits must be 0 or 1");
        lab.push_back(c == '1');
      }
      if (s >= d.labels.size()) {
        d.labels.resize(std::size_t{s} + 1);
        declared.resize(std::size_t{s} + 1, false);
      }
      if (declared[s])
        fail("state " + id + " declared twice");
      declared[s] = true;
      d.labels[s] = std::move(lab);
    } else if (kw == "edge") {
      std::string a, b, extra;
      if (!(ls >> a >> b) || (ls >> extra))
        fail("expected 'edge <src> <dst>'");
      d.edges.emplace_back(parse_id(a, lineno), parse_id(b, lineno));
    } else if (kw == "init") {
      std::string a, extra;
      if (!(ls >> a) || (ls >> extra))
        fail("expected 'init <id>'");
      d.init = parse_id(a, lineno);
      have_init = true;
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  if (!have_ap)
    throw ParseError("missing 'ap:' line", lineno);
  if (!have_init)
    throw ParseError("missing 'init' line", lineno);
  for (std::size_t s = 0; s < declared.size(); ++s)
    if (!declared[s])
      throw ParseError("state ids must be dense; state " + std::to_string(s) + " is missing",
                       lineno);
  try {
    d.validate();
  } catch (const ModelError &e) {
    throw ParseError(e.what(), lineno);
  }
  return d;
}

std::string format_explicit_ks(const ExplicitKsData &d) {
  std::ostringstream os;
  os << "ap:";
  for (const auto &a : d.ap)
    os << ' ' << a;
  os << '\n';
  for (std::size_t s = 0; s < d.labels.size(); ++s) {
    os << "state " << s << ' ';
    for (bool b : d.labels[s])
      os << (b ? '1' : '0');
    os << '\n';
  }
  for (auto [s, t] : d.edges)
    os << "edge " << s << ' ' << t << '\n';
  os << "init " << d.init << '\n';
  return os.str();
}

ExplicitKs::ExplicitKs(DdManager &mgr, PropUniverse &ap, ExplicitKsData data)
    : KripkeModel(mgr, ap), data_(std::move(data)) {
  data_.validate();
  PropSet defined;
  std::vector<PropId> ids;
  for (const auto &name : data_.ap) {
    PropId p = ap.declare(name);
    ids.push_back(p);
    defined.push_back(p);
  }
  std::sort(defined.begin(), defined.end());
  defined.erase(std::unique(defined.begin(), defined.end()), defined.end());
  if (defined.size() != ids.size())
    throw ModelError("duplicate proposition in 'ap:'");
  set_defined_props(defined);

  const std::size_t n = data_.labels.size();
  while ((std::size_t{1} << bits_) < n)
    ++bits_;
  if (bits_ > 31)
    throw ModelError("too many states for an explicit Kripke structure");
  allocate_state_vars(bits_);

  std::vector<VarIndex> cur, both;
  for (auto [c, x] : var_pairs()) {
    cur.push_back(c);
    both.push_back(c);
    both.push_back(x);
  }
  std::vector<std::uint64_t> codes;
  for (auto [s, t] : data_.edges)
    codes.push_back(interleave(s, t, bits_));
  rel_ = set_of_codes(mgr, codes, both);

  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<std::uint64_t> members;
    for (std::uint32_t s = 0; s < n; ++s)
      if (data_.labels[s][i])
        members.push_back(s);
    labels_.emplace_back(ids[i], set_of_codes(mgr, members, cur));
  }

  std::vector<std::pair<VarIndex, VarIndex>> to_next = var_pairs();
  std::vector<std::pair<VarIndex, VarIndex>> to_cur;
  for (auto [c, x] : var_pairs())
    to_cur.emplace_back(x, c);
  to_next_ = mgr.make_var_map(to_next);
  to_cur_ = mgr.make_var_map(to_cur);
  init_ = state(data_.init);
}

Bdd ExplicitKs::encode(std::uint32_t s, bool next) const {
  std::vector<VarIndex> vars;
  std::vector<bool> vals;
  for (std::size_t i = 0; i < bits_; ++i) {
    auto [c, x] = var_pairs()[i];
    vars.push_back(next ? x : c);
    vals.push_back(((s >> (bits_ - 1 - i)) & 1u) != 0);
  }
  return manager().cube(vars, vals);
}

Bdd ExplicitKs::state(std::uint32_t s) const {
  if (s >= num_states())
    throw UsageError("state id out of range");
  return encode(s, false);
}

Bdd ExplicitKs::states(const std::vector<std::uint32_t> &ids) const {
  std::vector<std::uint64_t> codes;
  for (auto s : ids) {
    if (s >= num_states())
      throw UsageError("state id out of range");
    codes.push_back(s);
  }
  std::vector<VarIndex> cur;
  for (auto [c, x] : var_pairs())
    cur.push_back(c);
  return set_of_codes(manager(), codes, cur);
}

std::vector<std::uint32_t> ExplicitKs::ids(const Bdd &set) const {
  std::vector<std::uint32_t> out;
  manager().for_each_minterm(set, state_vars(), [&](const std::vector<bool> &bits) {
    std::uint32_t s = 0;
    for (bool b : bits)
      s = (s << 1) | (b ? 1u : 0u);
    out.push_back(s);
    return true;
  });
  return out;
}

Bdd ExplicitKs::image(const Bdd &s, std::size_t) {
  DdManager &m = manager();
  return m.permute(m.and_exists(s, rel_, state_vars()), to_cur_);
}

Bdd ExplicitKs::preimage(const Bdd &s, std::size_t) {
  DdManager &m = manager();
  return m.and_exists(rel_, m.permute(s, to_next_), next_vars());
}

Bdd ExplicitKs::label(PropId p) const {
  for (const auto &[q, b] : labels_)
    if (q == p)
      return b;
  throw UsageError("proposition '" + ap().name(p) + "' is not defined by the model");
}

std::string ExplicitKs::describe_state(const std::vector<bool> &bits) const {
  std::uint32_t s = 0;
  for (bool b : bits)
    s = (s << 1) | (b ? 1u : 0u);
  return "s" + std::to_string(s);
}

} // namespace hmc
