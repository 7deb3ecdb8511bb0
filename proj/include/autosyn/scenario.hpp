#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adversary.hpp"
#include "chain.hpp"

namespace autosyn {

using json = nlohmann::ordered_json;

struct PartySpec {
  int id = 0;
  int64_t stake = 1;
  bool start_online = true;
  bool start_operational = true;
  bool start_time_aware = true;
  int64_t pre_wait = -1;  // -1: use the scenario default
};

struct AvailabilityEvent {
  int64_t at = 0;
  int party = 0;
  std::string resource;  // net | ro | clock | corrupt
  bool drop = true;
};

struct TxEvent {
  int64_t at = 0;
  Tx tx;
};

struct WrapperConfig {
  std::string mode = "off";  // off | pre_run | full
  double alpha = 0;          // required alert-stake ratio
  double beta = 0;           // required participating-stake ratio
  double eps = 0;
  double eta_bound = 0;
  std::string r_gate = "none";  // none | main | single_window
  bool vrf_gate = true;
};

struct ChecksConfig {
  bool enabled = false;
  int64_t cp_k = -1;
  double cg_tau = -1;
  int64_t cg_s = -1;
  double cq_mu = -1;
  int64_t cq_k = -1;
  int64_t ecq_s = -1;
  double cg2_tau = -1;
  int64_t cg2_s = -1;
};

struct MonitorConfig {
  bool enabled = false;  // in-run quality and growth monitors
  double cq_mu = 0;
  int64_t cq_k = 0;
  double cg_tau = 0;
  int64_t cg_k = 0;
};

struct AdversaryConfig {
  std::string strategy = "passive";
  int64_t extra_delay = -1;
  int64_t release_depth = 2;
  int64_t max_withhold = -1;
  DelayAttackStrategy::Script script{};
  std::vector<ScriptedDelayStrategy::Rule> delays;
};

struct FigureScript {
  bool use_override = false;
  std::map<int64_t, int> leader_override;
  std::map<std::pair<int, int>, int> forced_rd;  // (sender, recipient) -> rd
};

struct Scenario {
  std::string name = "run";
  uint64_t seed = 1;
  std::vector<PartySpec> parties;
  std::vector<int> corrupted;
  ChainParams params;
  int64_t t_round1 = 10;
  int64_t t_start = 4;
  int64_t t_run = -1;  // -1: 40% of t_round1
  double eta_net = 1.0;
  int64_t slots = 100;
  int64_t horizon_ticks = -1;
  std::string selection = "bg";  // bg | mc
  AdversaryConfig adversary;
  std::vector<AvailabilityEvent> availability;
  std::vector<TxEvent> txs;
  WrapperConfig wrapper;
  ChecksConfig checks;
  MonitorConfig monitors;
  bool analysis_divergence = true;
  int64_t divergence_max_len = 25000;
  FigureScript figure;
  bool trace_verbose = false;

  int64_t effective_t_run() const {
    if (t_run > 0) return t_run;
    return std::max<int64_t>(1, (4 * t_round1) / 10);
  }
  int64_t effective_pre_wait(const PartySpec& p) const {
    if (p.pre_wait >= 0) return p.pre_wait;
    if (params.pre_wait >= 0) return params.pre_wait;
    return effective_t_run() / 2;
  }
};

inline Scenario scenario_from_json(const json& j) {
  static const std::set<std::string> known = {
      "name",       "seed",      "parties",    "corrupted",        "R",
      "f",          "l_vrf",     "k_sel",      "s_sel",            "pre_wait",
      "t_round1",   "t_start",   "t_run",      "eta",              "slots",
      "horizon_ticks", "selection", "divergence", "divergence_max_len", "trace_verbose",
      "adversary",  "availability", "txs",     "wrapper",          "checks",
      "monitors",   "figure"};
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!known.count(k)) throw std::runtime_error("unknown scenario key: " + k);
  }
  Scenario sc;
  sc.name = j.value("name", sc.name);
  sc.seed = j.value("seed", sc.seed);
  if (j.contains("parties")) {
    if (j["parties"].is_number()) {
      int n = j["parties"].get<int>();
      for (int i = 1; i <= n; ++i) sc.parties.push_back({i, 1, true, true, true, -1});
    } else {
      for (const auto& p : j["parties"]) {
        PartySpec ps;
        ps.id = p.at("id").get<int>();
        ps.stake = p.value("stake", int64_t{1});
        ps.start_online = p.value("online", true);
        ps.start_operational = p.value("operational", true);
        ps.start_time_aware = p.value("time_aware", true);
        ps.pre_wait = p.value("pre_wait", int64_t{-1});
        sc.parties.push_back(ps);
      }
    }
  }
  if (j.contains("corrupted")) sc.corrupted = j["corrupted"].get<std::vector<int>>();
  sc.params.R = j.value("R", sc.params.R);
  sc.params.f = j.value("f", sc.params.f);
  sc.params.l_vrf = j.value("l_vrf", sc.params.l_vrf);
  sc.params.k_sel = j.value("k_sel", sc.params.k_sel);
  sc.params.s_sel = j.value("s_sel", sc.params.s_sel);
  sc.params.pre_wait = j.value("pre_wait", int64_t{-1});
  sc.t_round1 = j.value("t_round1", sc.t_round1);
  sc.t_start = j.value("t_start", sc.t_start);
  sc.t_run = j.value("t_run", sc.t_run);
  sc.eta_net = j.value("eta", sc.eta_net);
  sc.slots = j.value("slots", sc.slots);
  sc.horizon_ticks = j.value("horizon_ticks", sc.horizon_ticks);
  sc.selection = j.value("selection", sc.selection);
  sc.analysis_divergence = j.value("divergence", sc.analysis_divergence);
  sc.divergence_max_len = j.value("divergence_max_len", sc.divergence_max_len);
  sc.trace_verbose = j.value("trace_verbose", sc.trace_verbose);
  if (j.contains("adversary")) {
    const auto& a = j["adversary"];
    sc.adversary.strategy = a.value("strategy", sc.adversary.strategy);
    sc.adversary.extra_delay = a.value("extra_delay", sc.adversary.extra_delay);
    sc.adversary.release_depth = a.value("release_depth", sc.adversary.release_depth);
    sc.adversary.max_withhold = a.value("max_withhold", sc.adversary.max_withhold);
    sc.adversary.script.attacker = a.value("attacker", 0);
    sc.adversary.script.slot = a.value("attack_slot", int64_t{0});
    sc.adversary.script.at_tick = a.value("attack_tick", int64_t{0});
    if (a.contains("delays"))
      for (const auto& d : a["delays"])
        sc.adversary.delays.push_back({d.at("sender").get<int>(), d.at("recipient").get<int>(),
                                       d.at("arrive").get<int64_t>()});
  }
  if (j.contains("availability")) {
    for (const auto& e : j["availability"]) {
      AvailabilityEvent ev;
      ev.at = e.at("at").get<int64_t>();
      ev.party = e.at("party").get<int>();
      ev.resource = e.at("resource").get<std::string>();
      ev.drop = e.value("drop", true);
      sc.availability.push_back(ev);
    }
  }
  if (j.contains("txs")) {
    uint64_t next_id = 1;
    for (const auto& t : j["txs"]) {
      TxEvent ev;
      ev.at = t.at("at").get<int64_t>();
      ev.tx.id = t.value("id", next_id);
      next_id = std::max(next_id, ev.tx.id) + 1;
      ev.tx.transfer = t.value("transfer", true);
      ev.tx.from = t.value("from", 0);
      ev.tx.to = t.value("to", 0);
      ev.tx.amount = t.value("amount", int64_t{0});
      sc.txs.push_back(ev);
    }
  }
  if (j.contains("wrapper")) {
    const auto& w = j["wrapper"];
    sc.wrapper.mode = w.value("mode", sc.wrapper.mode);
    sc.wrapper.alpha = w.value("alpha", sc.wrapper.alpha);
    sc.wrapper.beta = w.value("beta", sc.wrapper.beta);
    sc.wrapper.eps = w.value("eps", sc.wrapper.eps);
    sc.wrapper.eta_bound = w.value("eta_bound", sc.wrapper.eta_bound);
    sc.wrapper.r_gate = w.value("r_gate", sc.wrapper.r_gate);
    sc.wrapper.vrf_gate = w.value("vrf_gate", sc.wrapper.vrf_gate);
  }
  if (j.contains("checks")) {
    const auto& c = j["checks"];
    sc.checks.enabled = c.value("enabled", true);
    sc.checks.cp_k = c.value("cp_k", sc.checks.cp_k);
    sc.checks.cg_tau = c.value("cg_tau", sc.checks.cg_tau);
    sc.checks.cg_s = c.value("cg_s", sc.checks.cg_s);
    sc.checks.cq_mu = c.value("cq_mu", sc.checks.cq_mu);
    sc.checks.cq_k = c.value("cq_k", sc.checks.cq_k);
    sc.checks.ecq_s = c.value("ecq_s", sc.checks.ecq_s);
    sc.checks.cg2_tau = c.value("cg2_tau", sc.checks.cg2_tau);
    sc.checks.cg2_s = c.value("cg2_s", sc.checks.cg2_s);
  }
  if (j.contains("monitors")) {
    const auto& m = j["monitors"];
    sc.monitors.enabled = m.value("enabled", true);
    sc.monitors.cq_mu = m.value("cq_mu", sc.monitors.cq_mu);
    sc.monitors.cq_k = m.value("cq_k", sc.monitors.cq_k);
    sc.monitors.cg_tau = m.value("cg_tau", sc.monitors.cg_tau);
    sc.monitors.cg_k = m.value("cg_k", sc.monitors.cg_k);
  }
  if (j.contains("figure")) {
    const auto& f = j["figure"];
    sc.figure.use_override = true;
    if (f.contains("leaders"))
      for (const auto& [k, v] : f["leaders"].items())
        sc.figure.leader_override[std::stoll(k)] = v.get<int>();
    if (f.contains("forced_rd"))
      for (const auto& e : f["forced_rd"])
        sc.figure.forced_rd[{e.at("sender").get<int>(), e.at("recipient").get<int>()}] =
            e.at("rd").get<int>();
  }
  if (sc.parties.empty()) throw std::runtime_error("scenario has no parties");
  return sc;
}

inline json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  json parties = json::array();
  for (const auto& p : sc.parties) {
    json e;
    e["id"] = p.id;
    e["stake"] = p.stake;
    if (!p.start_online) e["online"] = false;
    if (!p.start_operational) e["operational"] = false;
    if (!p.start_time_aware) e["time_aware"] = false;
    if (p.pre_wait >= 0) e["pre_wait"] = p.pre_wait;
    parties.push_back(e);
  }
  j["parties"] = parties;
  if (!sc.corrupted.empty()) j["corrupted"] = sc.corrupted;
  j["R"] = sc.params.R;
  j["f"] = sc.params.f;
  j["l_vrf"] = sc.params.l_vrf;
  j["k_sel"] = sc.params.k_sel;
  j["s_sel"] = sc.params.s_sel;
  j["t_round1"] = sc.t_round1;
  j["t_start"] = sc.t_start;
  j["t_run"] = sc.effective_t_run();
  j["eta"] = sc.eta_net;
  j["slots"] = sc.slots;
  j["selection"] = sc.selection;
  j["adversary"] = sc.adversary.strategy;
  j["wrapper"] = sc.wrapper.mode;
  return j;
}

// Walkthrough scenarios: four (or three) unit-stake parties with a pinned
// leader schedule; delivery draws forced where the walkthrough needs them.
inline Scenario make_figure_scenario(const std::string& id) {
  Scenario sc;
  sc.name = id;
  sc.seed = 20;
  sc.t_round1 = 10;
  sc.t_run = 4;
  sc.params.R = 100;
  sc.params.f = 0.5;
  sc.params.k_sel = 50;
  sc.params.pre_wait = 2;
  sc.t_start = 3;
  sc.slots = 5;
  sc.eta_net = 1.0;
  sc.selection = "mc";
  sc.figure.use_override = true;
  sc.analysis_divergence = true;
  int n = (id == "fig5") ? 3 : 4;
  for (int i = 1; i <= n; ++i) sc.parties.push_back({i, 1, true, true, true, -1});

  if (id == "fig1") {
    sc.figure.leader_override = {{1, 1}, {2, 2}, {3, 3}, {4, 4}};
    sc.figure.forced_rd[{2, 3}] = kRdLossyUnset;
  } else if (id == "fig2") {
    sc.figure.leader_override = {{1, 1}, {2, 2}, {3, 3}, {4, 4}};
    sc.figure.forced_rd[{2, 3}] = kRdLossyUnset;
    sc.figure.forced_rd[{2, 4}] = kRdLossyUnset;
  } else if (id == "fig3") {
    sc.figure.leader_override = {{2, 2}, {3, 3}, {4, 4}};
  } else if (id == "fig4") {
    sc.figure.leader_override = {{1, 1}, {2, 2}, {3, 3}, {4, 4}};
    sc.figure.forced_rd[{1, 2}] = kRdLossyUnset;
    sc.adversary.strategy = "scripted-delay";
    sc.adversary.delays.push_back({1, 2, 11});  // into slot 2, before the wait expires
  } else if (id == "fig5") {
    sc.figure.leader_override = {{1, 1}, {2, 2}};
    sc.corrupted = {2};
    sc.adversary.strategy = "delay-attack";
    sc.adversary.script = {2, 2, 10};
    sc.wrapper.vrf_gate = false;
    sc.eta_net = 0.8;
  } else {
    throw std::runtime_error("unknown figure id: " + id);
  }
  return sc;
}

inline std::unique_ptr<Strategy> make_strategy(const AdversaryConfig& a) {
  if (a.strategy == "passive") return std::make_unique<PassiveStrategy>();
  if (a.strategy == "max-delay") return std::make_unique<MaxDelayStrategy>(a.extra_delay);
  if (a.strategy == "scripted-delay") return std::make_unique<ScriptedDelayStrategy>(a.delays);
  if (a.strategy == "delay-attack") return std::make_unique<DelayAttackStrategy>(a.script);
  if (a.strategy == "private-fork")
    return std::make_unique<PrivateForkStrategy>(a.release_depth, a.max_withhold);
  throw std::runtime_error("unknown adversary strategy: " + a.strategy);
}

}  // namespace autosyn
