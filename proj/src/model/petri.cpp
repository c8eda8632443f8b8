#include "hybridmc/model/petri.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>

#include "hybridmc/errors.hpp"

namespace hmc {

std::size_t PetriNet::place_index(std::string_view name) const {
  for (std::size_t i = 0; i < places.size(); ++i)
    if (places[i].name == name)
      return i;
  throw ModelError("unknown place '" + std::string(name) + "'");
}

std::size_t PetriNet::add_place(std::string name, unsigned bound, unsigned init) {
  places.push_back({std::move(name), bound, init});
  return places.size() - 1;
}

void PetriNet::add_transition(std::string name, std::vector<std::pair<std::string, unsigned>> in,
                              std::vector<std::pair<std::string, unsigned>> out) {
  PetriTransition t{std::move(name), {}, {}};
  for (auto &[p, w] : in)
    t.in.push_back({place_index(p), w});
  for (auto &[p, w] : out)
    t.out.push_back({place_index(p), w});
  transitions.push_back(std::move(t));
}

void PetriNet::add_prop(std::string name, std::string predicate) {
  props.push_back({std::move(name), std::move(predicate)});
}

void PetriNet::validate() const {
  std::map<std::string, int> seen;
  for (const auto &p : places) {
    if (p.init > p.bound)
      throw ModelError("place '" + p.name + "' starts above its bound");
    if (p.bound == 0)
      throw ModelError("place '" + p.name + "' needs a positive bound");
    if (seen[p.name]++)
      throw ModelError("place '" + p.name + "' declared twice");
  }
  for (const auto &t : transitions)
    for (const auto *arcs : {&t.in, &t.out})
      for (const auto &a : *arcs) {
        if (a.place >= places.size())
          throw ModelError("transition '" + t.name + "' refers to an unknown place");
        if (a.weight == 0)
          throw ModelError("transition '" + t.name + "' has a zero-weight arc");
      }
}

namespace {

/// Recursive-descent predicate parser; comparisons are delegated to `cmp`.
class PredicateParser {
public:
  using Cmp = std::function<Bdd(const std::string &, const std::string &, unsigned)>;

  PredicateParser(std::string_view text, DdManager &m, Cmp cmp)
      : s_(text), m_(m), cmp_(std::move(cmp)) {}

  Bdd run() {
    Bdd r = parse_or();
    skip();
    if (i_ != s_.size())
      fail("unexpected text");
    return r;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError("predicate '" + std::string(s_) + "' at offset " + std::to_string(i_) +
                         ": " + msg,
                     i_);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                              s_[i_] == '.'))
      ++i_;
    if (b == i_)
      fail("expected a place name");
    return std::string(s_.substr(b, i_ - b));
  }
  unsigned number() {
    skip();
    unsigned v = 0;
    auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
    if (ec != std::errc())
      fail("expected a number");
    i_ = static_cast<std::size_t>(p - s_.data());
    return v;
  }
  Bdd parse_or() {
    Bdd r = parse_and();
    while (eat("||"))
      r |= parse_and();
    return r;
  }
  Bdd parse_and() {
    Bdd r = parse_unary();
    while (eat("&&"))
      r &= parse_unary();
    return r;
  }
  Bdd parse_unary() {
    if (eat("!"))
      return !parse_unary();
    if (eat("(")) {
      Bdd r = parse_or();
      if (!eat(")"))
        fail("expected ')'");
      return r;
    }
    std::string name = ident();
    if (name == "true")
      return m_.bdd_true();
    if (name == "false")
      return m_.bdd_false();
    std::string op;
    if (eat(">="))
      op = ">=";
    else if (eat("<="))
      op = "<=";
    else if (eat("=="))
      op = "=";
    else if (eat("="))
      op = "=";
    else
      fail("expected '=', '>=' or '<='");
    return cmp_(name, op, number());
  }

  std::string_view s_;
  std::size_t i_ = 0;
  DdManager &m_;
  Cmp cmp_;
};

std::vector<std::pair<std::string, unsigned>> parse_arcs(std::istringstream &ls,
                                                         std::string &stop_word,
                                                         std::size_t lineno) {
  std::vector<std::pair<std::string, unsigned>> out;
  std::string w;
  stop_word.clear();
  while (ls >> w) {
    if (w == "out") {
      stop_word = w;
      break;
    }
    std::string name = w;
    unsigned weight = 1;
    if (auto c = w.find(':'); c != std::string::npos) {
      name = w.substr(0, c);
      std::string_view ws(w);
      ws.remove_prefix(c + 1);
      auto [p, ec] = std::from_chars(ws.data(), ws.data() + ws.size(), weight);
      if (ec != std::errc() || p != ws.data() + ws.size())
        throw ParseError("line " + std::to_string(lineno) + ": invalid arc weight in '" + w + "'",
                         lineno);
    }
    out.emplace_back(name, weight);
  }
  return out;
}

unsigned parse_unsigned(const std::string &s, std::size_t lineno, const char *what) {
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError("line " + std::to_string(lineno) + ": invalid " + what + " '" + s + "'",
                     lineno);
  return v;
}

/// Syntax and place-name check of a predicate, independent of any encoding.
void check_predicate(const std::string &text, const PetriNet &net, std::size_t lineno) {
  DdManager scratch;
  PredicateParser parser(text, scratch,
                         [&](const std::string &name, const std::string &, unsigned) {
                           if (std::none_of(net.places.begin(), net.places.end(),
                                            [&](const PetriPlace &p) { return p.name == name; }))
                             throw ParseError("unknown place '" + name + "'", 0);
                           return scratch.bdd_true();
                         });
  try {
    parser.run();
  } catch (const ParseError &e) {
    throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
  }
}

} // namespace

PetriNet parse_petri(std::string_view text) {
  PetriNet net;
  std::vector<std::size_t> prop_lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  auto fail = [&](const std::string &msg) {
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
    try {
      if (kw == "place") {
        std::string name, kb, b, ki, i, extra;
        if (!(ls >> name >> kb >> b >> ki >> i) || kb != "bound" || ki != "init" || (ls >> extra))
          fail("expected 'place <name> bound <k> init <m>'");
        net.add_place(name, parse_unsigned(b, lineno, "bound"), parse_unsigned(i, lineno, "init"));
      } else if (kw == "trans") {
        std::string name, kin;
        if (!(ls >> name >> kin) || kin != "in")
          fail("expected 'trans <name> in ... out ...'");
        std::string stop;
        auto ins = parse_arcs(ls, stop, lineno);
        if (stop != "out")
          fail("missing 'out' section");
        auto outs = parse_arcs(ls, stop, lineno);
        if (!stop.empty())
          fail("'out' given twice");
        net.add_transition(name, ins, outs);
      } else if (kw == "prop") {
        std::string name, assign;
        if (!(ls >> name >> assign) || assign != ":=")
          fail("expected 'prop <name> := <predicate>'");
        std::string rest;
        std::getline(ls, rest);
        boost::algorithm::trim(rest);
        if (rest.empty())
          fail("empty predicate for '" + name + "'");
        prop_lines.push_back(lineno);
        net.add_prop(name, rest);
      } else {
        fail("unknown keyword '" + kw + "'");
      }
    } catch (const ModelError &e) {
      fail(e.what());
    }
  }
  try {
    net.validate();
  } catch (const ModelError &e) {
    throw ParseError(e.what(), lineno);
  }
  for (std::size_t k = 0; k < net.props.size(); ++k)
    check_predicate(net.props[k].predicate, net, prop_lines[k]);
  return net;
}

std::string format_petri(const PetriNet &net) {
  std::ostringstream os;
  for (const auto &p : net.places)
    os << "place " << p.name << " bound " << p.bound << " init " << p.init << '\n';
  for (const auto &t : net.transitions) {
    os << "trans " << t.name << " in";
    for (const auto &a : t.in)
      os << ' ' << net.places[a.place].name << ':' << a.weight;
    os << " out";
    for (const auto &a : t.out)
      os << ' ' << net.places[a.place].name << ':' << a.weight;
    os << '\n';
  }
  for (const auto &p : net.props)
    os << "prop " << p.name << " := " << p.predicate << '\n';
  return os.str();
}

PetriNetKs::PetriNetKs(DdManager &mgr, PropUniverse &ap, PetriNet net)
    : KripkeModel(mgr, ap), net_(std::move(net)) {
  net_.validate();
  std::size_t total = 0;
  for (const auto &p : net_.places) {
    std::size_t bits = 1;
    while ((std::uint64_t{1} << bits) < std::uint64_t{p.bound} + 1)
      ++bits;
    std::vector<std::size_t> offs;
    for (std::size_t b = 0; b < bits; ++b)
      offs.push_back(total++);
    place_bits_.push_back(std::move(offs));
  }
  allocate_state_vars(total);

  init_ = mgr.bdd_true();
  for (std::size_t p = 0; p < net_.places.size(); ++p)
    init_ &= value(p, net_.places[p].init, false);

  for (const auto &t : net_.transitions) {
    std::map<std::size_t, std::pair<unsigned, unsigned>> w; // place -> (pre, post)
    for (const auto &a : t.in)
      w[a.place].first += a.weight;
    for (const auto &a : t.out)
      w[a.place].second += a.weight;
    Bdd rel = mgr.bdd_true(), enabled = mgr.bdd_true(), fits = mgr.bdd_true();
    std::vector<VarIndex> cur, next;
    std::vector<std::pair<VarIndex, VarIndex>> to_cur, to_next;
    for (const auto &[p, pw] : w) {
      auto [pre, post] = pw;
      const unsigned bound = net_.places[p].bound;
      Bdd rp = mgr.bdd_false(), ep = mgr.bdd_false(), fp = mgr.bdd_false();
      for (unsigned v = pre; v <= bound; ++v) {
        Bdd cv = value(p, v, false);
        ep |= cv;
        std::uint64_t nv = std::uint64_t{v} - pre + post;
        if (nv <= bound) {
          fp |= cv;
          rp |= cv & value(p, static_cast<unsigned>(nv), true);
        }
      }
      rel &= rp;
      enabled &= ep;
      fits &= fp;
      for (std::size_t off : place_bits_[p]) {
        auto [c, x] = var_pairs()[off];
        cur.push_back(c);
        next.push_back(x);
        to_cur.emplace_back(x, c);
        to_next.emplace_back(c, x);
      }
    }
    trans_.push_back({rel, enabled - fits, VarSet(mgr, cur), VarSet(mgr, next),
                      mgr.make_var_map(to_cur), mgr.make_var_map(to_next)});
  }

  PropSet defined;
  for (const auto &pp : net_.props) {
    PropId id = ap.declare(pp.name);
    if (std::find(defined.begin(), defined.end(), id) != defined.end())
      throw ModelError("proposition '" + pp.name + "' defined twice");
    defined.push_back(id);
    labels_.emplace_back(id, predicate(pp.predicate));
  }
  std::sort(defined.begin(), defined.end());
  set_defined_props(defined);
}

Bdd PetriNetKs::value(std::size_t place, unsigned v, bool next) const {
  const auto &offs = place_bits_[place];
  std::vector<VarIndex> vars;
  std::vector<bool> vals;
  for (std::size_t i = 0; i < offs.size(); ++i) {
    auto [c, x] = var_pairs()[offs[i]];
    vars.push_back(next ? x : c);
    vals.push_back(((v >> (offs.size() - 1 - i)) & 1u) != 0);
  }
  return manager().cube(vars, vals);
}

Bdd PetriNetKs::compare(std::size_t place, const std::string &op, unsigned c) const {
  Bdd r = manager().bdd_false();
  for (unsigned v = 0; v <= net_.places[place].bound; ++v) {
    bool ok = op == "=" ? v == c : op == ">=" ? v >= c : v <= c;
    if (ok)
      r |= value(place, v, false);
  }
  return r;
}

Bdd PetriNetKs::predicate(std::string_view text) const {
  PredicateParser parser(text, manager(), [&](const std::string &name, const std::string &op,
                                              unsigned c) {
    return compare(net_.place_index(name), op, c);
  });
  return parser.run();
}

Bdd PetriNetKs::marking(const std::vector<unsigned> &m) const {
  if (m.size() != net_.places.size())
    throw UsageError("marking has the wrong number of places");
  Bdd r = manager().bdd_true();
  for (std::size_t p = 0; p < m.size(); ++p)
    r &= value(p, m[p], false);
  return r;
}

std::vector<unsigned> PetriNetKs::decode(const std::vector<bool> &bits) const {
  std::vector<unsigned> m;
  for (const auto &offs : place_bits_) {
    unsigned v = 0;
    for (std::size_t off : offs)
      v = (v << 1) | (bits.at(off) ? 1u : 0u);
    m.push_back(v);
  }
  return m;
}

Bdd PetriNetKs::image(const Bdd &s, std::size_t t) {
  DdManager &m = manager();
  const Rel &r = trans_.at(t);
  if (!(s & r.overflow).is_false()) {
    std::string where;
    Bdd witness = s & r.overflow;
    where = describe(witness);
    throw ModelError("transition '" + net_.transitions[t].name +
                     "' exceeds a place bound from marking " + where);
  }
  return m.permute(m.and_exists(s, r.relation, r.cur), r.to_cur);
}

Bdd PetriNetKs::preimage(const Bdd &s, std::size_t t) {
  DdManager &m = manager();
  const Rel &r = trans_.at(t);
  return m.and_exists(r.relation, m.permute(s, r.to_next), r.next);
}

Bdd PetriNetKs::label(PropId p) const {
  for (const auto &[q, b] : labels_)
    if (q == p)
      return b;
  throw UsageError("proposition '" + ap().name(p) + "' is not defined by the model");
}

std::string PetriNetKs::describe_state(const std::vector<bool> &bits) const {
  std::vector<unsigned> m = decode(bits);
  std::string out;
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] == 0)
      continue;
    if (!out.empty())
      out += ',';
    out += net_.places[p].name;
    if (m[p] != 1)
      out += '=' + std::to_string(m[p]);
  }
  return out.empty() ? "(empty)" : out;
}

} // namespace hmc
