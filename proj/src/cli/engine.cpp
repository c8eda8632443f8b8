#include "hybridmc/cli/engine.hpp"

#include <chrono>
#include <fstream>
#include <limits>
#include <sstream>

#include "hybridmc/errors.hpp"
#include "hybridmc/ltl/translate.hpp"
#include "hybridmc/model/builtin.hpp"
#include "hybridmc/model/explicit_ks.hpp"
#include "hybridmc/model/petri.hpp"
#include "hybridmc/symbolic/symbolic.hpp"

namespace hmc {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t saturate(const BigCount &n) {
  if (n > std::numeric_limits<std::uint64_t>::max())
    return std::numeric_limits<std::uint64_t>::max();
  return n.convert_to<std::uint64_t>();
}

} // namespace

std::string ModelSource::label() const {
  if (kind == Kind::Builtin)
    return name + ":" + std::to_string(scale);
  return path;
}

ModelSource parse_model_source(std::string_view text) {
  ModelSource src;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    std::string name(text.substr(0, colon));
    for (const auto &b : builtin_names()) {
      if (b != name)
        continue;
      std::string num(text.substr(colon + 1));
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(num, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != num.size())
        throw UsageError("bad scale in model '" + std::string(text) + "'");
      src.kind = ModelSource::Kind::Builtin;
      src.name = name;
      src.scale = static_cast<unsigned>(v);
      return src;
    }
  }
  src.path = std::string(text);
  if (ends_with(text, ".ks"))
    src.kind = ModelSource::Kind::ExplicitFile;
  else if (ends_with(text, ".pn") || ends_with(text, ".net"))
    src.kind = ModelSource::Kind::PetriFile;
  else
    throw UsageError("cannot tell the model kind of '" + std::string(text) +
                     "' (use name:scale for a builtin, or a .ks, .pn or .net file)");
  return src;
}

LoadedModel load_model(const ModelSource &src, DdConfig config) {
  LoadedModel m;
  m.mgr = std::make_unique<DdManager>(config);
  m.ap = std::make_unique<PropUniverse>(*m.mgr);
  switch (src.kind) {
  case ModelSource::Kind::Builtin:
    m.model = std::make_unique<PetriNetKs>(*m.mgr, *m.ap, builtin_net(src.name, src.scale));
    break;
  case ModelSource::Kind::ExplicitFile:
    m.model = std::make_unique<ExplicitKs>(*m.mgr, *m.ap, parse_explicit_ks(read_file(src.path)));
    break;
  case ModelSource::Kind::PetriFile:
    m.model = std::make_unique<PetriNetKs>(*m.mgr, *m.ap, parse_petri(read_file(src.path)));
    break;
  }
  return m;
}

const char *to_string(RunStatus s) {
  switch (s) {
  case RunStatus::Ok:
    return "ok";
  case RunStatus::Timeout:
    return "timeout";
  case RunStatus::Resource:
    return "resource";
  case RunStatus::Error:
    return "error";
  }
  return "?";
}

void check_compatibility(Method m, const ltl::Formula &f) {
  if (!needs_stutter_invariance(m) || !ltl::contains_next(f))
    return;
  if (m == Method::Sop)
    throw UsageError("SOP requires a stuttering-invariant (X-free) formula");
  throw UsageError("SOG requires a stuttering-invariant (X-free) formula");
}

CheckReport run_check(const ltl::Formula &f, const ModelSource &src, const CheckOptions &opt) {
  check_compatibility(opt.method, f);
  DdConfig cfg;
  cfg.node_limit = opt.node_limit;
  LoadedModel m;
  try {
    m = load_model(src, cfg);
  } catch (const ResourceError &e) {
    CheckReport rep;
    rep.status = RunStatus::Resource;
    rep.message = e.what();
    return rep;
  }
  return run_check(f, m, opt);
}

CheckReport run_check(const ltl::Formula &f0, LoadedModel &m, const CheckOptions &opt) {
  const ltl::Formula f = opt.negate ? ltl::lnot(f0) : f0;
  check_compatibility(opt.method, f);
  using clock = std::chrono::steady_clock;
  CheckReport rep;
  const auto start = clock::now();
  DdManager &mgr = *m.mgr;
  if (opt.timeout_s)
    mgr.set_deadline(start + std::chrono::duration_cast<clock::duration>(
                                 std::chrono::duration<double>(*opt.timeout_s)));
  struct ClearDeadline {
    DdManager &mgr;
    ~ClearDeadline() { mgr.set_deadline(std::nullopt); }
  } clear{mgr};

  try {
    Tgba a = ltl::translate(f, *m.ap);
    if (is_symbolic(opt.method)) {
      SymbolicProduct sp(a, *m.model);
      SymbolicResult r = opt.method == Method::Owcty ? owcty(sp) : el(sp);
      rep.verdict = r.verdict;
      rep.states = saturate(r.reachable_states);
      rep.edges = r.outer_iterations;
      rep.peak_nodes = r.peak_nodes;
    } else {
      ProductGraph p = make_product(opt.method, a, *m.model);
      EmptinessResult r = check_emptiness(*p.graph);
      ExpansionStats st = p.graph->stats();
      rep.verdict = r.verdict;
      rep.states = st.states_created;
      rep.edges = st.edges;
      rep.peak_nodes = st.peak_nodes;
      if (r.lasso && opt.keep_lasso) {
        for (const LassoStep &s : r.lasso->prefix)
          rep.prefix.push_back(p.graph->describe(s.state) + " " + s.acc.to_string());
        for (const LassoStep &s : r.lasso->cycle)
          rep.cycle.push_back(p.graph->describe(s.state) + " " + s.acc.to_string());
        rep.lasso_valid = validate_lasso(*p.graph, *r.lasso);
      }
    }
    if (rep.verdict == Verdict::NonEmpty && opt.concretize) {
      auto t = concretize(a, *m.model);
      if (t) {
        auto render = [&](const ConcreteStep &s) {
          return "q" + std::to_string(s.q) + " " + s.name + " " + s.acc.to_string();
        };
        for (const auto &s : t->prefix)
          rep.concrete_prefix.push_back(render(s));
        for (const auto &s : t->cycle)
          rep.concrete_cycle.push_back(render(s));
        rep.concrete_valid = validate_trace(a, *m.model, *t);
      }
    }
  } catch (const TimeoutError &e) {
    rep.status = RunStatus::Timeout;
    rep.message = e.what();
  } catch (const ResourceError &e) {
    rep.status = RunStatus::Resource;
    rep.message = e.what();
  }
  rep.time_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  if (rep.status == RunStatus::Ok)
    rep.peak_nodes = std::max<std::uint64_t>(rep.peak_nodes, mgr.stats().peak_nodes);
  return rep;
}

} // namespace hmc
