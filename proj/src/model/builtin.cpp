#include "hybridmc/model/builtin.hpp"

#include "hybridmc/errors.hpp"

namespace hmc {

namespace {

std::string idx(const char *base, unsigned i) { return base + std::to_string(i); }

using Arcs = std::vector<std::pair<std::string, unsigned>>;

} // namespace

PetriNet philo_net(unsigned n) {
  if (n < 2)
    throw UsageError("philo needs at least 2 philosophers");
  PetriNet net;
  for (unsigned i = 0; i < n; ++i) {
    net.add_place(idx("Idle_", i), 1, 1);
    net.add_place(idx("WaitL_", i), 1, 0);
    net.add_place(idx("WaitR_", i), 1, 0);
    net.add_place(idx("HasL_", i), 1, 0);
    net.add_place(idx("HasR_", i), 1, 0);
    net.add_place(idx("Eat_", i), 1, 0);
    net.add_place(idx("Fork_", i), 1, 1);
  }
  for (unsigned i = 0; i < n; ++i) {
    unsigned j = (i + 1) % n;
    net.add_transition(idx("hungry_", i), Arcs{{idx("Idle_", i), 1}},
                       Arcs{{idx("WaitL_", i), 1}, {idx("WaitR_", i), 1}});
    net.add_transition(idx("takeL_", i), Arcs{{idx("WaitL_", i), 1}, {idx("Fork_", i), 1}},
                       Arcs{{idx("HasL_", i), 1}});
    net.add_transition(idx("takeR_", i), Arcs{{idx("WaitR_", i), 1}, {idx("Fork_", j), 1}},
                       Arcs{{idx("HasR_", i), 1}});
    net.add_transition(idx("eat_", i), Arcs{{idx("HasL_", i), 1}, {idx("HasR_", i), 1}},
                       Arcs{{idx("Eat_", i), 1}});
    net.add_transition(idx("release_", i), Arcs{{idx("Eat_", i), 1}},
                       Arcs{{idx("Idle_", i), 1}, {idx("Fork_", i), 1}, {idx("Fork_", j), 1}});
  }
  net.add_prop("eat0", "Eat_0 = 1");
  net.add_prop("eat1", "Eat_1 = 1");
  net.add_prop("waitL0", "WaitL_0 = 1");
  net.add_prop("fork1", "Fork_1 = 1");
  return net;
}

PetriNet kanban_net(unsigned n) {
  if (n < 1)
    throw UsageError("kanban needs at least 1 card");
  PetriNet net;
  for (unsigned i = 1; i <= 4; ++i) {
    net.add_place(idx("P", i), n, n);
    net.add_place(idx("Pm", i), n, 0);
    net.add_place(idx("Pback", i), n, 0);
    net.add_place(idx("Pout", i), n, 0);
  }
  for (unsigned i = 1; i <= 4; ++i) {
    net.add_transition(idx("redo", i), Arcs{{idx("Pm", i), 1}}, Arcs{{idx("Pback", i), 1}});
    net.add_transition(idx("back", i), Arcs{{idx("Pback", i), 1}}, Arcs{{idx("Pm", i), 1}});
    net.add_transition(idx("ok", i), Arcs{{idx("Pm", i), 1}}, Arcs{{idx("Pout", i), 1}});
  }
  net.add_transition("in1", Arcs{{"P1", 1}}, Arcs{{"Pm1", 1}});
  net.add_transition("sync123", Arcs{{"Pout1", 1}, {"P2", 1}, {"P3", 1}},
                     Arcs{{"P1", 1}, {"Pm2", 1}, {"Pm3", 1}});
  net.add_transition("sync234", Arcs{{"Pout2", 1}, {"Pout3", 1}, {"P4", 1}},
                     Arcs{{"P2", 1}, {"P3", 1}, {"Pm4", 1}});
  net.add_transition("out4", Arcs{{"Pout4", 1}}, Arcs{{"P4", 1}});
  net.add_prop("busy1", "Pm1 >= 1");
  net.add_prop("back2", "Pback2 >= 1");
  net.add_prop("done3", "Pout3 >= 1");
  net.add_prop("free4", "P4 >= 1");
  return net;
}

PetriNet fms_net(unsigned n) {
  if (n < 1)
    throw UsageError("fms needs at least 1 pallet");
  PetriNet net;
  const unsigned b = std::max(n, 3u);
  for (const char *p : {"P1", "P2", "P3"})
    net.add_place(p, b, n);
  for (const char *p : {"P1wM1", "P1M1", "P1d", "P1s", "P1wP2", "P2wM2", "P2M2", "P2d", "P2s",
                        "P2wP1", "P12", "P12wM3", "P12M3", "P12s", "P3M2", "P3s"})
    net.add_place(p, b, 0);
  net.add_place("M1", b, 3);
  net.add_place("M2", b, 1);
  net.add_place("M3", b, 2);

  auto t = [&](const char *name, Arcs in, Arcs out) { net.add_transition(name, in, out); };
  t("tP1", {{"P1", 1}}, {{"P1wM1", 1}});
  t("tM1", {{"P1wM1", 1}, {"M1", 1}}, {{"P1M1", 1}});
  t("tP1M1", {{"P1M1", 1}}, {{"P1d", 1}, {"M1", 1}});
  t("tP1e", {{"P1d", 1}}, {{"P1s", 1}});
  t("tP1j", {{"P1d", 1}}, {{"P1wP2", 1}});
  t("tP1s", {{"P1s", 1}}, {{"P1", 1}});
  t("tP2", {{"P2", 1}}, {{"P2wM2", 1}});
  t("tM2", {{"P2wM2", 1}, {"M2", 1}}, {{"P2M2", 1}});
  t("tP2M2", {{"P2M2", 1}}, {{"P2d", 1}, {"M2", 1}});
  t("tP2e", {{"P2d", 1}}, {{"P2s", 1}});
  t("tP2j", {{"P2d", 1}}, {{"P2wP1", 1}});
  t("tP2s", {{"P2s", 1}}, {{"P2", 1}});
  t("tx", {{"P1wP2", 1}, {"P2wP1", 1}}, {{"P12", 1}});
  t("tP12", {{"P12", 1}}, {{"P12wM3", 1}});
  t("tM3", {{"P12wM3", 1}, {"M3", 1}}, {{"P12M3", 1}});
  t("tP12M3", {{"P12M3", 1}}, {{"P12s", 1}, {"M3", 1}});
  t("tP12s", {{"P12s", 1}}, {{"P1", 1}, {"P2", 1}});
  // A type-3 part starts on M2 only while M2 is idle, but does not hold it.
  t("tP3", {{"P3", 1}, {"M2", 1}}, {{"P3M2", 1}, {"M2", 1}});
  t("tP3M2", {{"P3M2", 1}}, {{"P3s", 1}});
  t("tP3s", {{"P3s", 1}}, {{"P3", 1}});
  net.add_prop("waitM1", "P1wM1 >= 1");
  net.add_prop("m3free", "M3 >= 1");
  net.add_prop("join", "P12 >= 1");
  net.add_prop("p3busy", "P3M2 >= 1");
  return net;
}

PetriNet ring_net(unsigned n) {
  if (n < 2)
    throw UsageError("ring needs at least 2 nodes");
  PetriNet net;
  for (unsigned i = 0; i < n; ++i) {
    net.add_place(idx("Wait_", i), 1, 1);
    net.add_place(idx("HasFree_", i), 1, 0);
    net.add_place(idx("HasUsed_", i), 1, 0);
    net.add_place(idx("Freed_", i), 1, 0);
    net.add_place(idx("Pass_", i), 1, 0);
    /// Link from node i to node i+1: a free slot, a used slot, or nothing.
    net.add_place(idx("SlotFree_", i), 1, 1);
    net.add_place(idx("SlotUsed_", i), 1, 0);
    net.add_place(idx("LinkEmpty_", i), 1, 0);
  }
  for (unsigned i = 0; i < n; ++i) {
    unsigned p = (i + n - 1) % n;
    auto t = [&](const char *name, Arcs in, Arcs out) { net.add_transition(idx(name, i), in, out); };
    t("Free_", {{idx("Wait_", i), 1}, {idx("SlotFree_", p), 1}},
      {{idx("HasFree_", i), 1}, {idx("LinkEmpty_", p), 1}});
    t("Used_", {{idx("Wait_", i), 1}, {idx("SlotUsed_", p), 1}},
      {{idx("HasUsed_", i), 1}, {idx("LinkEmpty_", p), 1}});
    t("Write_", {{idx("HasFree_", i), 1}}, {{idx("Pass_", i), 1}});
    t("Go_", {{idx("HasFree_", i), 1}, {idx("LinkEmpty_", i), 1}},
      {{idx("Wait_", i), 1}, {idx("SlotFree_", i), 1}});
    t("Other_", {{idx("HasUsed_", i), 1}}, {{idx("Pass_", i), 1}});
    t("Owner_", {{idx("HasUsed_", i), 1}}, {{idx("Freed_", i), 1}});
    t("Give_", {{idx("Freed_", i), 1}, {idx("LinkEmpty_", i), 1}},
      {{idx("Wait_", i), 1}, {idx("SlotFree_", i), 1}});
    t("Put_", {{idx("Pass_", i), 1}, {idx("LinkEmpty_", i), 1}},
      {{idx("Wait_", i), 1}, {idx("SlotUsed_", i), 1}});
  }
  net.add_prop("free0", "HasFree_0 = 1");
  net.add_prop("used0", "HasUsed_0 = 1");
  net.add_prop("wait1", "Wait_1 = 1");
  net.add_prop("full1", "SlotUsed_1 = 1");
  return net;
}

PetriNet builtin_net(std::string_view name, unsigned scale) {
  if (name == "philo")
    return philo_net(scale);
  if (name == "ring")
    return ring_net(scale);
  if (name == "fms")
    return fms_net(scale);
  if (name == "kanban")
    return kanban_net(scale);
  throw UsageError("unknown builtin model '" + std::string(name) +
                   "' (expected philo, ring, fms or kanban)");
}

std::vector<std::string> builtin_names() { return {"philo", "ring", "fms", "kanban"}; }

} // namespace hmc
