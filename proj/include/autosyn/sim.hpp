#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adversary.hpp"
#include "bounds.hpp"
#include "chain.hpp"
#include "charstring.hpp"
#include "checkers.hpp"
#include "clock.hpp"
#include "crypto.hpp"
#include "network.hpp"
#include "party.hpp"
#include "scenario.hpp"
#include "trace.hpp"

namespace autosyn {

// Exit codes shared with the command-line front end.
inline constexpr int kExitClean = 0;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitWrapper = 3;

// One experiment: wires the clock, the four delivery instances, the key
// registries and the parties together, drives the tick loop, then runs the
// post-hoc analysis and assembles the report.
class Simulation {
 public:
  Simulation(const Scenario& sc, uint64_t seed, TraceWriter* trace = nullptr)
      : sc_(sc),
        seed_(seed),
        params_(sc.params),
        clock_(sc.t_start, sc.effective_t_run()),
        bc_("bc", Rng::derive_seed(seed, "net-bc"), sc.eta_net),
        txnet_("tx", Rng::derive_seed(seed, "net-tx"), sc.eta_net),
        adjnet_("adj", Rng::derive_seed(seed, "net-adj"), sc.eta_net),
        hello_("hello", Rng::derive_seed(seed, "net-hello"), sc.eta_net),
        vrf_(Rng::derive_seed(seed, "vrf"), sc.params.l_vrf),
        kes_(Rng::derive_seed(seed, "kes")),
        trace_(trace) {
    t_run_ = sc_.effective_t_run();

    genesis_.t_start = sc_.t_start;
    genesis_.t_round1 = sc_.t_round1;
    genesis_.eta1 = Hasher(0x6175746f73796e31ULL).u64(seed).finish();
    for (const auto& ps : sc_.parties)
      genesis_.stakes.push_back({ps.id, vrf_.keygen(ps.id), kes_.keygen(ps.id), ps.stake});
    genesis_.compute_id();
    root_ = make_genesis_node(genesis_);

    epochs_ = std::make_unique<EpochContext>(&genesis_, &params_);
    validator_ = std::make_unique<ChainValidator>(epochs_.get(), &vrf_, &kes_);
    if (sc_.figure.use_override) {
      override_ = sc_.figure.leader_override;
      validator_->set_leader_override(&override_);
    }
    if (!sc_.figure.forced_rd.empty()) {
      auto forced = sc_.figure.forced_rd;
      bc_.forced_rd = [forced](int s, int r) -> std::optional<int> {
        auto it = forced.find({s, r});
        if (it == forced.end()) return std::nullopt;
        return it->second;
      };
    }

    std::set<int> corrupt_at_start(sc_.corrupted.begin(), sc_.corrupted.end());
    for (const auto& ps : sc_.parties) {
      Party p;
      p.id = ps.id;
      p.online = ps.start_online;
      p.operational = ps.start_operational;
      p.time_aware = ps.start_time_aware;
      p.corrupted = corrupt_at_start.count(ps.id) > 0;
      p.offline_memory = !ps.start_online;
      p.pre_wait = sc_.effective_pre_wait(ps);
      if (p.time_aware && !p.corrupted) clock_.register_party(ps.id);
      if (p.online)
        for (Diffusion* n : nets()) n->register_party(ps.id);
      if (p.corrupted) corrupted_ids_.push_back(ps.id);
      parties_.emplace(ps.id, std::move(p));
    }

    strategy_ = make_strategy(sc_.adversary);
    adv_ = {&bc_,    &txnet_,  &adjnet_, &hello_,          &vrf_,
            &kes_,   epochs_.get(), &genesis_, root_, &params_, &corrupted_ids_,
            t_run_,  sc_.wrapper.vrf_gate, nullptr};
    adv_rng_ = Rng::derive(seed, "adversary");
    adv_.rng = &adv_rng_;

    wire_services();
  }

  int run() {
    if (!wrapper_precheck()) {
      stopped_ = "wrapper";
      exit_code_ = kExitWrapper;
      finalize();
      return exit_code_;
    }
    const int64_t horizon = sc_.horizon_ticks > 0
                                ? sc_.horizon_ticks
                                : sc_.t_start + (sc_.slots + 10) * sc_.t_round1 * 4 + 64;
    for (;;) {
      int64_t now = clock_.now();
      tick(now);
      ++ticks_;
      if (!stopped_.empty()) break;
      if (reference_slot() > sc_.slots) {
        stopped_ = "slots";
        break;
      }
      if (now >= horizon) {
        stopped_ = "horizon";
        break;
      }
      if (!clock_.advance()) {
        // the pacing gate stayed shut: no agreeable boundary among reports
        stopped_ = "deadlock";
        exit_code_ = kExitWrapper;
        break;
      }
    }
    finalize();
    return exit_code_;
  }

  const json& report() const { return report_; }
  const std::string& metrics_csv() const { return metrics_; }
  const std::map<int, Party>& parties() const { return parties_; }
  Party& party(int id) { return parties_.at(id); }
  Chain reference_chain() const { return reference_; }
  const std::vector<Violation>& violations() const { return violations_; }
  const std::vector<std::string>& bad_events() const { return bad_events_; }
  const CharString& w_raw() const { return w_raw_; }
  const CharString& w_real() const { return w_real_; }
  EpochContext& epochs() { return *epochs_; }
  Diffusion& bc() { return bc_; }
  AutoClock& clock() { return clock_; }
  Services& services() { return services_; }
  int64_t now() const { return clock_.now(); }
  Strategy* strategy() { return strategy_.get(); }

 private:
  std::vector<Diffusion*> nets() { return {&bc_, &txnet_, &adjnet_, &hello_}; }

  void wire_services() {
    services_.clock = &clock_;
    services_.bc = &bc_;
    services_.txnet = &txnet_;
    services_.adjnet = &adjnet_;
    services_.hello = &hello_;
    services_.vrf = &vrf_;
    services_.kes = &kes_;
    services_.epochs = epochs_.get();
    services_.validator = validator_.get();
    services_.genesis = &genesis_;
    services_.genesis_root = root_;
    services_.params = &params_;
    services_.t_run = t_run_;
    services_.use_bg = sc_.selection != "mc";
    services_.vrf_gate = [this](int p) {
      if (!sc_.wrapper.vrf_gate) return true;
      const Party& pt = parties_.at(p);
      return !pt.corrupted && pt.synchronized;
    };
    services_.multicast = [this](Diffusion& net, const NetMsg& m, int sender, int64_t now,
                                 int64_t t_next, int64_t t_round) {
      auto leaks = net.honest_multicast(sender, m, now, t_next, t_round);
      if (strategy_) strategy_->on_leak(adv_, net, sender, now, t_next, t_round, m, leaks);
    };
    services_.on_round_complete = [this](int id, int64_t sl, int64_t t_begin, const Chain& c) {
      if (sl < 1) return;
      const Party& p = parties_.at(id);
      if (!p.alert()) return;
      auto& snap = onsets_[sl];
      snap.sl = sl;
      snap.t_begin = t_begin;
      snap.alert.emplace_back(id, c);
      auto& meta = slot_meta_[sl];
      // round synchrony: at a round boundary every alert party must hold the
      // same (sl, t_round, t_next); the first recorder pins the expected
      // values. Pre-waiting leaders record late but with identical values.
      if (meta.alert_ids.empty()) {
        meta.t_begin = t_begin;
        meta.t_round = p.t_round;
        meta.t_next = p.t_next;
      } else if (meta.t_begin != t_begin || meta.t_round != p.t_round ||
                 meta.t_next != p.t_next) {
        round_synchrony_abort(sl, id);
      }
      auto [tick_it, fresh] = onset_by_tick_.try_emplace(t_begin, sl);
      if (!fresh && tick_it->second != sl) round_synchrony_abort(sl, id);
      meta.alert_ids.insert(id);
      meta.ref_height = std::max(meta.ref_height, c->height);
    };
    if (trace_ && trace_->open()) {
      services_.trace = [this](int party, std::string_view kind, std::string_view detail) {
        trace_->event(clock_.now(), kind, party, detail);
      };
    }
  }

  // ------------------------------------------------------------- tick loop

  void tick(int64_t now) {
    apply_availability(now);
    for (Diffusion* n : nets()) n->promote_deadlines(now);
    for (const auto& ev : sc_.txs)
      if (ev.at == now)
        for (auto& [id, p] : parties_)
          if (!p.corrupted) p.submit_tx(ev.tx);
    for (auto& [id, p] : parties_) p.activate(services_, now);
    if (strategy_) strategy_->end_of_tick(adv_, now);
    for (Diffusion* n : nets()) n->promote_unattended();
    drain_promotions(now);
    if (now >= 0) clock_.functionalities_ready();
    end_of_tick_checks(now);
  }

  void apply_availability(int64_t now) {
    for (const auto& ev : sc_.availability) {
      if (ev.at != now) continue;
      Party& p = parties_.at(ev.party);
      if (ev.resource == "net") {
        if (ev.drop) {
          p.online = false;
          p.offline_memory = true;
          for (Diffusion* n : nets()) n->deregister_party(ev.party);
        } else {
          p.online = true;
          for (Diffusion* n : nets()) n->register_party(ev.party);
        }
      } else if (ev.resource == "ro") {
        p.operational = !ev.drop;
      } else if (ev.resource == "clock") {
        if (ev.drop) {
          p.time_aware = false;
          clock_.deregister_party(ev.party);
        } else {
          p.time_aware = true;
          if (!p.corrupted) clock_.register_party(ev.party);
        }
      } else if (ev.resource == "corrupt" && ev.drop && !p.corrupted) {
        p.corrupted = true;
        clock_.deregister_party(ev.party);
        corrupted_ids_.push_back(ev.party);
      }
      if (trace_ && trace_->open())
        trace_->event(now, ev.drop ? "drop-" + ev.resource : "restore-" + ev.resource, ev.party,
                      "");
    }
  }

  void drain_promotions(int64_t now) {
    for (Diffusion* n : nets()) {
      auto evs = n->drain_promotions();
      if (sc_.trace_verbose && trace_ && trace_->open())
        for (const auto& e : evs)
          trace_->event(now, "promote", e.recipient,
                        "rd " + std::to_string(e.rd_from) + "->" + std::to_string(e.rd_to));
    }
  }

  int64_t reference_slot() const {
    for (const auto& [id, p] : parties_)
      if (p.alert()) return p.sl;
    return -1;
  }

  void round_synchrony_abort(int64_t sl, int party) {
    if (exit_code_ == kExitViolation) return;
    bad_events_.push_back("round-synchrony at slot " + std::to_string(sl) + " (party " +
                          std::to_string(party) + ")");
    stopped_ = "bad-event";
    exit_code_ = kExitViolation;
  }

  void end_of_tick_checks(int64_t now) {
    // per-slot hooks fire once the slot has fully elapsed (late recorders,
    // e.g. pre-waiting leaders, land within the slot); resyncs can skip
    // slots, so walk keys rather than counting up
    for (auto it = onsets_.upper_bound(checked_slot_); it != onsets_.end(); ++it) {
      const auto& meta = slot_meta_.at(it->first);
      if (meta.t_begin + meta.t_round > now) break;
      checked_slot_ = it->first;
      if (!slot_checks(it->first)) return;
    }
  }

  bool slot_checks(int64_t sl) {
    const auto& meta = slot_meta_.at(sl);
    if (sc_.wrapper.mode == "full") {
      int64_t alert_stake = 0, part_stake = 0, total = genesis_.total_stake();
      for (const auto& e : genesis_.stakes) {
        bool alert = meta.alert_ids.count(e.party) > 0;
        bool corr = parties_.at(e.party).corrupted;
        if (alert) alert_stake += e.stake;
        if (alert || corr) part_stake += e.stake;
      }
      double a = total ? static_cast<double>(alert_stake) / total : 0;
      double b = total ? static_cast<double>(part_stake) / total : 0;
      if (a + 1e-12 < sc_.wrapper.alpha) {
        wrapper_notes_.push_back("alert ratio " + std::to_string(a) + " below bound at slot " +
                                 std::to_string(sl));
        stopped_ = "wrapper";
        exit_code_ = kExitWrapper;
        return false;
      }
      if (b + 1e-12 < sc_.wrapper.beta) {
        wrapper_notes_.push_back("participation " + std::to_string(b) + " below bound at slot " +
                                 std::to_string(sl));
        stopped_ = "wrapper";
        exit_code_ = kExitWrapper;
        return false;
      }
      int64_t n = bc_.draws_on_time() + bc_.draws_lossy();
      if (n >= 100) {
        double r = static_cast<double>(bc_.draws_on_time()) / n;
        double sigma = std::sqrt(std::max(sc_.wrapper.eta_bound * (1 - sc_.wrapper.eta_bound),
                                          1e-12) /
                                 n);
        if (r < sc_.wrapper.eta_bound - 3 * sigma) {
          wrapper_notes_.push_back("delivery ratio " + std::to_string(r) +
                                   " below bound at slot " + std::to_string(sl));
          stopped_ = "wrapper";
          exit_code_ = kExitWrapper;
          return false;
        }
      }
    }

    if (sc_.monitors.enabled) {
      const Chain& c = onsets_.at(sl).alert.front().second;
      if (sc_.monitors.cq_k > 0 && c->height >= sc_.monitors.cq_k) {
        int64_t adv = 0;
        const BlockNode* n = c.get();
        for (int64_t i = 0; i < sc_.monitors.cq_k; ++i, n = n->parent.get())
          if (!n->hflag) ++adv;
        double frac = static_cast<double>(adv) / sc_.monitors.cq_k;
        if (frac > 1.0 - sc_.monitors.cq_mu + 1e-12) {
          bad_events_.push_back("quality monitor: adversarial fraction " + std::to_string(frac) +
                                " in last " + std::to_string(sc_.monitors.cq_k) +
                                " blocks at slot " + std::to_string(sl));
          stopped_ = "bad-event";
          exit_code_ = kExitViolation;
          return false;
        }
      }
      if (sc_.monitors.cg_k > 0 && sc_.monitors.cg_tau > 0) {
        int64_t w = static_cast<int64_t>(
            std::ceil(sc_.monitors.cg_k / sc_.monitors.cg_tau));
        if (sl > w && slot_meta_.count(sl - w)) {
          int64_t grown = meta.ref_height - slot_meta_.at(sl - w).ref_height;
          if (grown < sc_.monitors.cg_k) {
            bad_events_.push_back("growth monitor: " + std::to_string(grown) + " blocks over " +
                                  std::to_string(w) + " rounds at slot " + std::to_string(sl));
            stopped_ = "bad-event";
            exit_code_ = kExitViolation;
            return false;
          }
        }
      }
    }
    return true;
  }

  // --------------------------------------------------------------- wrapper

  bool wrapper_precheck() {
    if (sc_.wrapper.mode == "off") return true;
    bool ok = true;
    double alpha = sc_.wrapper.alpha;
    double beta = sc_.wrapper.beta > 0 ? sc_.wrapper.beta : alpha;
    if (sc_.eta_net + 1e-12 < sc_.wrapper.eta_bound) {
      wrapper_notes_.push_back("configured delivery rate below the required bound");
      ok = false;
    }
    if (!admissible(alpha, params_.f, sc_.wrapper.eta_bound, sc_.wrapper.eps)) {
      wrapper_notes_.push_back("admissibility: alpha(1-f)^2 eta <= (1+eps)/2");
      ok = false;
    }
    if (sc_.wrapper.r_gate != "none") {
      BoundParams bp;
      bp.f = params_.f;
      bp.beta = beta;
      bp.eta = sc_.wrapper.eta_bound;
      bp.eps = sc_.wrapper.eps;
      double need = sc_.wrapper.r_gate == "single_window" ? r_gate_single_window(bp)
                                                          : r_gate_main(bp);
      if (static_cast<double>(params_.R) < need) {
        wrapper_notes_.push_back("epoch length below the " + sc_.wrapper.r_gate +
                                 " gate: R >= " + std::to_string(need) + " required");
        ok = false;
      }
    }
    return ok;
  }

  // ------------------------------------------------------------- post-run

  void finalize() {
    pick_reference();
    extract_characteristic();
    run_checkers();
    assemble_report();
  }

  void pick_reference() {
    for (const auto& [id, p] : parties_) {
      if (p.alert()) {
        reference_ = p.c_loc;
        reference_party_ = id;
        break;
      }
    }
    if (!reference_) {
      for (const auto& [id, p] : parties_) {
        if (p.is_init && !p.corrupted) {
          reference_ = p.c_loc;
          reference_party_ = id;
          break;
        }
      }
    }
    if (!reference_) reference_ = root_;
    max_slot_ = 0;
    if (!onsets_.empty()) max_slot_ = std::min(sc_.slots, onsets_.rbegin()->first);
  }

  void extract_characteristic() {
    if (max_slot_ < 1) return;
    std::set<int> corrupt(corrupted_ids_.begin(), corrupted_ids_.end());
    std::map<int64_t, const BlockNode*> ref_by_slot;
    for (const BlockNode* b = reference_.get(); b && !b->is_genesis(); b = b->parent.get())
      ref_by_slot[b->sl] = b;

    w_raw_.resize(max_slot_);
    delivered_.assign(max_slot_, 0);
    for (int64_t sl = 1; sl <= max_slot_; ++sl) {
      int64_t ep = std::max<int64_t>(epoch_of_slot(sl, params_.R), 1);
      Digest eta = epochs_->eta(reference_, ep);
      const StakeDist& dist = epochs_->stake_dist(reference_, ep);
      std::vector<int> leaders;
      if (sc_.figure.use_override) {
        auto it = override_.find(sl);
        if (it != override_.end()) leaders.push_back(it->second);
      } else {
        Digest in = vrf_input(eta, sl, kVrfTest);
        for (const auto& e : genesis_.stakes) {
          uint64_t T = leadership_threshold(params_.f, dist.alpha(e.party), params_.l_vrf);
          if (vrf_.eval_prove(e.party, in)->y < T) leaders.push_back(e.party);
        }
      }
      Sym s;
      if (leaders.empty()) {
        s = Sym::Bot;
      } else if (leaders.size() == 1 && !corrupt.count(leaders[0]) &&
                 slot_meta_.count(sl) && slot_meta_.at(sl).alert_ids.count(leaders[0])) {
        s = Sym::Zero;
        auto it = ref_by_slot.find(sl);
        delivered_[sl - 1] =
            it != ref_by_slot.end() && it->second->party == leaders[0] && it->second->hflag;
      } else {
        s = Sym::One;
      }
      w_raw_[sl - 1] = s;
      auto& meta = slot_meta_[sl];
      meta.leaders = static_cast<int64_t>(leaders.size());
      meta.sym = s;
      meta.delivered = delivered_[sl - 1];
    }
    w_real_ = real_reduction(w_raw_, delivered_);
  }

  void run_checkers() {
    if (!sc_.checks.enabled || max_slot_ < 1) return;
    CheckInput in;
    for (const auto& [sl, snap] : onsets_)
      if (sl <= max_slot_) in.onsets.push_back(snap);
    for (const auto& [id, p] : parties_)
      if (p.alert()) in.final_chains.emplace_back(id, p.c_loc);
    if (in.final_chains.empty())
      for (const auto& [id, p] : parties_)
        if (p.is_init && !p.corrupted) in.final_chains.emplace_back(id, p.c_loc);
    in.reference = reference_;
    in.max_slot = max_slot_;

    auto add = [&](std::vector<Violation> v) {
      for (auto& x : v) violations_.push_back(std::move(x));
    };
    if (sc_.checks.cp_k > 0) add(check_cp(in, sc_.checks.cp_k));
    if (sc_.checks.cg_s > 0 && sc_.checks.cg_tau > 0)
      add(check_cg(in, sc_.checks.cg_tau, sc_.checks.cg_s));
    if (sc_.checks.cg2_s > 0 && sc_.checks.cg2_tau > 0)
      add(check_cg2(in, sc_.checks.cg2_tau, sc_.checks.cg2_s));
    if (sc_.checks.cq_k > 0 && sc_.checks.cq_mu > 0)
      add(check_cq(in, sc_.checks.cq_mu, sc_.checks.cq_k));
    if (sc_.checks.ecq_s > 0) add(check_ecq(in, sc_.checks.ecq_s));
    if (!violations_.empty() && exit_code_ == kExitClean) exit_code_ = kExitViolation;
  }

  void assemble_report() {
    json r;
    r["schema"] = "autosyn-report/1";
    r["name"] = sc_.name;
    r["seed"] = seed_;
    r["scenario"] = scenario_to_json(sc_);
    {
      json g;
      g["id"] = genesis_.id.hex();
      g["total_stake"] = genesis_.total_stake();
      g["parties"] = genesis_.stakes.size();
      r["genesis"] = g;
    }
    {
      json run;
      run["ticks"] = ticks_;
      run["final_tick"] = clock_.now();
      run["round_updates"] = clock_.round_updates();
      run["stopped"] = stopped_.empty() ? "slots" : stopped_;
      run["slots_completed"] = max_slot_;
      r["run"] = run;
    }
    {
      json nets_j;
      const char* names[4] = {"bc", "tx", "adj", "hello"};
      Diffusion* ns[4] = {&bc_, &txnet_, &adjnet_, &hello_};
      for (int i = 0; i < 4; ++i) {
        json nj;
        nj["enqueued"] = ns[i]->enqueued();
        nj["fetched"] = ns[i]->fetched();
        nj["draws_on_time"] = ns[i]->draws_on_time();
        nj["draws_lossy"] = ns[i]->draws_lossy();
        nj["in_flight"] = ns[i]->in_flight();
        nets_j[names[i]] = nj;
      }
      r["network"] = nets_j;
    }
    {
      json ps = json::array();
      for (const auto& [id, p] : parties_) {
        json pj;
        pj["id"] = id;
        pj["alert"] = p.alert();
        pj["corrupted"] = p.corrupted;
        pj["sl"] = p.sl;
        pj["t_next"] = p.t_next;
        pj["t_round"] = p.t_round;
        pj["height"] = p.c_loc ? p.c_loc->height : 0;
        pj["tip"] = p.c_loc ? p.c_loc->id.hex() : "";
        pj["blocks_built"] = p.blocks_built;
        pj["chains_adopted"] = p.chains_adopted;
        pj["joins"] = p.joins;
        ps.push_back(pj);
      }
      r["parties"] = ps;
    }
    {
      json ref;
      ref["party"] = reference_party_;
      ref["height"] = reference_ ? reference_->height : 0;
      json blocks = json::array();
      std::vector<const BlockNode*> chain;
      for (const BlockNode* b = reference_.get(); b && !b->is_genesis(); b = b->parent.get())
        chain.push_back(b);
      std::reverse(chain.begin(), chain.end());
      for (const BlockNode* b : chain) {
        json bj;
        bj["sl"] = b->sl;
        bj["party"] = b->party;
        bj["hflag"] = b->hflag;
        bj["t_now"] = b->t_now;
        blocks.push_back(bj);
      }
      ref["blocks"] = blocks;
      r["reference"] = ref;
    }
    {
      json c;
      c["length"] = static_cast<int64_t>(w_raw_.size());
      c["w"] = format_charstring(w_raw_);
      c["w_real"] = format_charstring(w_real_);
      c["zeros"] = count_sym(w_raw_, Sym::Zero);
      c["ones"] = count_sym(w_raw_, Sym::One);
      c["bots"] = count_sym(w_raw_, Sym::Bot);
      int64_t dz = 0;
      for (bool d : delivered_)
        if (d) ++dz;
      c["delivered_zeros"] = dz;
      double alpha_cfg = honest_stake_ratio();
      RateAudit audit = rate_audit(w_real_, alpha_cfg, params_.f, sc_.eta_net);
      json a;
      a["slots"] = audit.slots;
      a["freq_zero"] = audit.freq_zero;
      a["freq_one"] = audit.freq_one;
      a["freq_bot"] = audit.freq_bot;
      a["bound_zero"] = audit.bound_zero;
      a["margin"] = audit.margin;
      a["zero_ok"] = audit.zero_ok;
      c["rate_audit"] = a;
      r["characteristic"] = c;
    }
    {
      json d;
      CharString reduced = bot_reduction(w_real_);
      bool computed = sc_.analysis_divergence &&
                      static_cast<int64_t>(reduced.size()) <= sc_.divergence_max_len;
      d["computed"] = computed;
      d["reduced_length"] = static_cast<int64_t>(reduced.size());
      if (computed) {
        d["value"] = divergence(w_real_);
        d["method"] = static_cast<int64_t>(reduced.size()) <= kDivergenceBruteMax
                          ? "exhaustive"
                          : "recurrence";
      }
      r["divergence"] = d;
    }
    {
      json adj = json::array();
      if (reference_ && max_slot_ >= 1) {
        int64_t ep_max = std::max<int64_t>(epoch_of_slot(max_slot_, params_.R), 1);
        std::vector<AdjustmentLog> logs;
        epochs_->round_lengths(reference_, ep_max, &logs);
        for (const auto& lg : logs) {
          json e;
          e["ep"] = lg.ep;
          e["t_round_in"] = lg.t_round_in;
          e["t_round_out"] = lg.t_round_out;
          e["v"] = lg.v;
          json ws = json::array();
          for (int w = 0; w < 2; ++w) {
            json wj;
            wj["used"] = lg.window[w].used;
            wj["records"] = lg.window[w].n_records;
            wj["mean_ta"] = lg.window[w].mean_ta;
            wj["mean_tb"] = lg.window[w].mean_tb;
            wj["v"] = lg.window[w].v;
            wj["negative_tb"] = lg.window[w].negative_tb;
            ws.push_back(wj);
          }
          e["windows"] = ws;
          adj.push_back(e);
        }
      }
      r["adjustments"] = adj;
    }
    {
      json ch;
      ch["enabled"] = sc_.checks.enabled;
      ch["violations"] = static_cast<int64_t>(violations_.size());
      json vs = json::array();
      for (const auto& v : violations_) {
        json vj;
        vj["property"] = v.property;
        vj["sl1"] = v.sl1;
        vj["sl2"] = v.sl2;
        vj["p1"] = v.p1;
        vj["p2"] = v.p2;
        vj["detail"] = v.detail;
        vs.push_back(vj);
      }
      ch["list"] = vs;
      r["checks"] = ch;
    }
    {
      json m;
      m["enabled"] = sc_.monitors.enabled;
      m["bad_events"] = bad_events_;
      r["monitors"] = m;
    }
    {
      json w;
      w["mode"] = sc_.wrapper.mode;
      w["verdict"] = (stopped_ == "wrapper" || stopped_ == "deadlock") ? "halt" : "pass";
      w["notes"] = wrapper_notes_;
      r["wrapper"] = w;
    }
    r["exit_code"] = exit_code_;
    report_ = std::move(r);

    std::ostringstream csv;
    csv << "slot,t_begin,t_round,alert,leaders,sym,delivered,ref_height\n";
    for (int64_t sl = 1; sl <= max_slot_; ++sl) {
      auto it = slot_meta_.find(sl);
      if (it == slot_meta_.end()) continue;
      const auto& m = it->second;
      char sym = sl <= static_cast<int64_t>(w_raw_.size())
                     ? "01_"[static_cast<int>(w_raw_[sl - 1])]
                     : '_';
      csv << sl << ',' << m.t_begin << ',' << m.t_round << ',' << m.alert_ids.size() << ','
          << m.leaders << ',' << sym << ',' << (m.delivered ? 1 : 0) << ',' << m.ref_height
          << '\n';
    }
    metrics_ = csv.str();
  }

  double honest_stake_ratio() const {
    std::set<int> corrupt(corrupted_ids_.begin(), corrupted_ids_.end());
    int64_t honest = 0, total = 0;
    for (const auto& e : genesis_.stakes) {
      total += e.stake;
      if (!corrupt.count(e.party)) honest += e.stake;
    }
    return total ? static_cast<double>(honest) / total : 0;
  }

  // ------------------------------------------------------------------ state

  struct SlotMeta {
    int64_t t_begin = 0;
    int64_t t_round = 0;
    int64_t t_next = 0;
    std::set<int> alert_ids;
    int64_t ref_height = 0;
    int64_t leaders = 0;
    Sym sym = Sym::Bot;
    bool delivered = false;
  };

  Scenario sc_;
  uint64_t seed_;
  ChainParams params_;
  Genesis genesis_;
  Chain root_;
  AutoClock clock_;
  Diffusion bc_, txnet_, adjnet_, hello_;
  VrfRegistry vrf_;
  KesRegistry kes_;
  std::unique_ptr<EpochContext> epochs_;
  std::unique_ptr<ChainValidator> validator_;
  std::map<int64_t, int> override_;
  std::map<int, Party> parties_;
  std::vector<int> corrupted_ids_;
  std::unique_ptr<Strategy> strategy_;
  AdversaryView adv_;
  Rng adv_rng_{0};
  Services services_;
  TraceWriter* trace_ = nullptr;
  int64_t t_run_ = 0;

  std::map<int64_t, OnsetSnapshot> onsets_;
  std::map<int64_t, SlotMeta> slot_meta_;
  std::map<int64_t, int64_t> onset_by_tick_;  // t_begin -> sl, one timeline
  int64_t checked_slot_ = 0;
  int64_t ticks_ = 0;
  std::string stopped_;
  int exit_code_ = kExitClean;
  std::vector<std::string> bad_events_;
  std::vector<std::string> wrapper_notes_;

  Chain reference_;
  int reference_party_ = -1;
  int64_t max_slot_ = 0;
  CharString w_raw_;
  CharString w_real_;
  std::vector<uint8_t> delivered_;
  std::vector<Violation> violations_;
  json report_;
  std::string metrics_;
};

}  // namespace autosyn
