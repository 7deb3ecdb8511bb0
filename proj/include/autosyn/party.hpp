#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chain.hpp"
#include "clock.hpp"
#include "crypto.hpp"
#include "network.hpp"

namespace autosyn {

// Shared facilities a party touches during an activation. Multicasts go
// through the scheduler so leakage reaches the adversary synchronously.
struct Services {
  AutoClock* clock = nullptr;
  Diffusion* bc = nullptr;
  Diffusion* txnet = nullptr;
  Diffusion* adjnet = nullptr;
  Diffusion* hello = nullptr;
  VrfRegistry* vrf = nullptr;
  KesRegistry* kes = nullptr;
  EpochContext* epochs = nullptr;
  ChainValidator* validator = nullptr;
  const Genesis* genesis = nullptr;
  // every chain in one simulation hangs off this node; lowest_common_ancestor
  // relies on pointer identity, so parties must not mint their own roots
  Chain genesis_root;
  const ChainParams* params = nullptr;
  int64_t t_run = 0;
  bool use_bg = true;
  // wrapper gate on VRF evaluation (corrupted or de-synchronized callers)
  std::function<bool(int party)> vrf_gate;
  std::function<void(Diffusion&, const NetMsg&, int sender, int64_t now, int64_t t_next,
                     int64_t t_round)>
      multicast;
  std::function<void(int party, int64_t sl, int64_t t_begin, const Chain&)> on_round_complete;
  std::function<void(int party, std::string_view kind, std::string_view detail)> trace;
};

class Party {
 public:
  enum class Phase { PreGenesis, Parked, Joining, PreWaiting };

  // identity and resources (toggled by the scheduler's availability events)
  int id = -1;
  bool operational = true;
  bool online = true;
  bool time_aware = true;
  bool corrupted = false;

  // protocol flags
  bool is_init = false;
  bool synchronized = false;
  bool offline_memory = false;

  // round state
  Chain c_loc;
  int64_t sl = 0;
  int64_t ep = 0;
  int64_t t_round = 0;
  int64_t t_begin = 0;
  int64_t t_next = 0;
  int64_t t_on = 0;
  std::optional<int64_t> t_rec;

  // buffers
  std::vector<Tx> tx_buffer;
  struct BufferedAdjust {
    AdjustRecord rec;
    int64_t t_adj = 0;  // arrival tick of the carrying message
  };
  std::vector<BufferedAdjust> adjust_buffer;
  struct PendingProof {
    int64_t sl = 0;
    uint64_t y = 0;
    Digest pi;
  };
  std::vector<PendingProof> s_adj;  // leadership proofs awaiting a receive time

  // per-party configuration
  int64_t pre_wait = 0;

  // counters surfaced in the report
  int64_t blocks_built = 0;
  int64_t chains_adopted = 0;
  int64_t joins = 0;

  Phase phase = Phase::PreGenesis;

  bool alert() const {
    return is_init && synchronized && operational && online && time_aware && !corrupted;
  }

  void activate(Services& sv, int64_t now) {
    if (corrupted) return;  // driven by the adversary strategy
    if (!time_aware) {
      passive_listen(sv, now);
      return;  // outside the clock wait set: no report
    }

    switch (phase) {
      case Phase::PreGenesis:
        if (!genesis_ready(sv, now)) {
          report(sv, 0);  // B.3: wait at t_next = 0 for the genesis round
          return;
        }
        complete_init(sv, now);
        [[fallthrough]];
      case Phase::Parked:
        parked_step(sv, now);
        return;
      case Phase::Joining:
        joining_step(sv, now);
        return;
      case Phase::PreWaiting:
        prewait_step(sv, now);
        return;
    }
  }

  // environment hands a transaction straight to this party's buffer
  void submit_tx(const Tx& t) { add_tx(t); }

  // exported ledger state: payload of the chain minus the last k blocks
  std::vector<Tx> read_state(Services& sv, int64_t now, int64_t k) {
    std::vector<Tx> out;
    if (!is_init) return out;
    fetch_information(sv, now);
    select_chain(sv, now);
    std::vector<const BlockNode*> blocks;
    for (const BlockNode* b = c_loc.get(); b && !b->is_genesis(); b = b->parent.get())
      blocks.push_back(b);
    std::reverse(blocks.begin(), blocks.end());
    if (static_cast<int64_t>(blocks.size()) <= k) return out;
    for (size_t i = 0; i + k < blocks.size(); ++i)
      for (const Tx& t : blocks[i]->txs) out.push_back(t);
    return out;
  }

 private:
  // ------------------------------------------------------------ init & join

  static bool genesis_ready(Services& sv, int64_t now) {
    (void)sv;
    return now >= 0;
  }

  void complete_init(Services& sv, int64_t now) {
    (void)now;
    c_loc = sv.genesis_root;
    is_init = true;
    t_round = sv.genesis->t_round1;
    t_next = 0;
    t_begin = 0;
    sl = 0;
    ep = 0;
    synchronized = true;
    phase = Phase::Parked;
    if (sv.trace) sv.trace(id, "init", "genesis adopted");
  }

  void parked_step(Services& sv, int64_t now) {
    if (phase == Phase::Parked && sync_on_wake_ && now >= t_next) {
      synchronized = true;
      sync_on_wake_ = false;
      if (sv.trace) sv.trace(id, "sync", "synchronized at round boundary");
    }
    if (now < t_next) {
      if (!operational) passive_listen(sv, now);
      report(sv, report_value());
      return;
    }
    // round boundary reached
    if (!online) {
      report(sv, std::nullopt);
      return;  // cannot maintain or join yet
    }
    if (offline_memory) {
      start_join(sv, now);
      return;
    }
    if (!operational) {
      passive_listen(sv, now);  // stalled: listening but no maintenance
      report(sv, std::nullopt);
      return;
    }
    run_maintenance(sv, now);
  }

  void start_join(Services& sv, int64_t now) {
    offline_memory = false;
    synchronized = false;
    join_got_chain_ = false;
    round_candidates_.clear();
    ++joins;
    sv.multicast(*sv.hello, HelloMsg{id}, id, now, now + 3 * sv.genesis->t_round1,
                 sv.genesis->t_round1);
    park_until_ = now + 3 * sv.genesis->t_round1;
    phase = Phase::Joining;
    if (sv.trace) sv.trace(id, "join", "hello sent, listening");
    report(sv, std::nullopt);
  }

  void joining_step(Services& sv, int64_t now) {
    if (now < park_until_) {
      report(sv, std::nullopt);
      return;
    }
    fetch_information(sv, now);
    if (select_chain(sv, now) > 0) join_got_chain_ = true;
    if (!join_got_chain_) {
      if (sv.trace) sv.trace(id, "join", "no chain during join window, retrying");
      start_join(sv, now);
      return;
    }
    SlotInfo si = current_slot_number(*sv.epochs, c_loc, now);
    sl = si.sl;
    ep = si.ep;
    t_round = si.t_round;
    t_next = si.t_next;
    t_begin = t_next - t_round;
    round_candidates_.clear();
    sync_on_wake_ = true;  // synchronized from the next round boundary
    phase = Phase::Parked;
    if (sv.trace)
      sv.trace(id, "join", "resolved slot " + std::to_string(sl) + " next " + std::to_string(t_next));
    report(sv, std::nullopt);
  }

  // ------------------------------------------------------------ maintenance

  void run_maintenance(Services& sv, int64_t now) {
    round_candidates_.clear();
    fetch_information(sv, now);
    select_chain(sv, now);
    update_time(sv, now);
    // round-start resets; pending proofs in s_adj survive (two-slot lifetime)
    t_on = sl;
    t_rec.reset();
    adj_batch_.clear();
    staking_procedure(sv, now);
    if (phase == Phase::PreWaiting) {
      report(sv, t_next);
      return;  // resumes in prewait_step
    }
    finish_round_tail(sv, now);
  }

  void prewait_step(Services& sv, int64_t now) {
    if (now < park_until_) {
      report(sv, t_next);
      return;
    }
    if (!online || !operational) {  // lost a resource mid-wait: abandon the slot
      phase = Phase::Parked;
      report(sv, std::nullopt);
      return;
    }
    fetch_information(sv, now);
    select_chain(sv, now);  // a late chain arriving here sets t_rec
    build_and_account(sv, now);
    finish_round_tail(sv, now);
  }

  void finish_round_tail(Services& sv, int64_t now) {
    if (welcome_pending_) {
      sv.multicast(*sv.bc, ChainMsg{c_loc}, id, now, t_next, t_round);
      sv.multicast(*sv.txnet, TxMsg{tx_buffer}, id, now, t_next, t_round);
      welcome_pending_ = false;
    }
    adjust_delay(sv, now);
    phase = Phase::Parked;
    if (sv.on_round_complete) sv.on_round_complete(id, sl, t_begin, c_loc);
    report(sv, t_next);
  }

  void fetch_information(Services& sv, int64_t now) {
    if (!online) return;
    for (auto& f : sv.bc->fetch(id, now)) {
      const auto& cm = std::get<ChainMsg>(f.m);
      round_candidates_.push_back({cm.chain, f.d_mid, f.seq});
    }
    for (auto& f : sv.txnet->fetch(id, now))
      for (const Tx& t : std::get<TxMsg>(f.m).txs) add_tx(t);
    for (auto& f : sv.adjnet->fetch(id, now))
      for (const AdjustRecord& r : std::get<AdjMsg>(f.m).records) add_adjust(r, f.d_mid);
    if (!sv.hello->fetch(id, now).empty()) welcome_pending_ = true;
  }

  void add_tx(const Tx& t) {
    if (tx_seen_.insert(t.id).second) tx_buffer.push_back(t);
  }

  void add_adjust(const AdjustRecord& r, int64_t t_adj) {
    if (!r.complete) return;
    if (adj_seen_.insert(r.key()).second) adjust_buffer.push_back({r, t_adj});
  }

  size_t select_chain(Services& sv, int64_t now) {
    std::vector<ChainCandidate> valid;
    for (const auto& c : round_candidates_) {
      if (validated_.count(c.chain->id)) {
        valid.push_back(c);
        continue;
      }
      ValidationResult r = sv.validator->validate(c.chain, now);
      if (r.ok) {
        validated_.insert(c.chain->id);
        valid.push_back(c);
      } else if (sv.trace) {
        sv.trace(id, "reject", r.reason);
      }
    }
    const ChainCandidate* win = sv.use_bg ? maxvalid_bg(c_loc, valid, *sv.params)
                                          : maxvalid_mc(c_loc, valid);
    if (win && win->chain != c_loc) {
      c_loc = win->chain;
      t_rec = win->d_mid;
      ++chains_adopted;
      if (sv.trace)
        sv.trace(id, "adopt", "height " + std::to_string(c_loc->height) + " at d_mid " +
                                  std::to_string(win->d_mid));
    }
    return valid.size();
  }

  void update_time(Services& sv, int64_t now) {
    const int64_t R = sv.params->R;
    if (sv.t_run + t_next > now) {
      sl += 1;
      int64_t new_ep = epoch_of_slot(sl, R);
      if (sl % R == 1 % R && new_ep >= 2) {
        auto lengths = sv.epochs->round_lengths(c_loc, new_ep);
        int64_t old = t_round;
        t_round = lengths[new_ep];
        if (sv.trace && t_round != old)
          sv.trace(id, "round-length",
                   "epoch " + std::to_string(new_ep) + ": " + std::to_string(old) + " -> " +
                       std::to_string(t_round));
      }
      t_begin = t_next;
      t_next = t_begin + t_round;
    } else {
      SlotInfo si = current_slot_number(*sv.epochs, c_loc, now);
      sl = si.sl;
      t_round = si.t_round;
      t_next = si.t_next;
      t_begin = t_next - t_round;
      synchronized = true;
      if (sv.trace) sv.trace(id, "resync", "slot " + std::to_string(sl));
    }
    ep = epoch_of_slot(sl, R);
  }

  void staking_procedure(Services& sv, int64_t now) {
    if (sv.vrf_gate && !sv.vrf_gate(id)) {
      sv.kes->evolve(id, sl);
      return;
    }
    const StakeDist& dist = sv.epochs->stake_dist(c_loc, std::max<int64_t>(ep, 1));
    Digest eta = sv.epochs->eta(c_loc, std::max<int64_t>(ep, 1));
    nonce_out_ = *sv.vrf->eval_prove(id, vrf_input(eta, sl, kVrfNonce));
    test_out_ = *sv.vrf->eval_prove(id, vrf_input(eta, sl, kVrfTest));
    bool leader;
    if (const auto* ov = sv.validator->leader_override()) {
      auto it = ov->find(sl);
      leader = it != ov->end() && it->second == id;
    } else {
      uint64_t T = leadership_threshold(sv.params->f, dist.alpha(id), sv.params->l_vrf);
      leader = test_out_.y < T;
    }
    if (!leader) {
      sv.kes->evolve(id, sl);
      return;
    }
    // empty-vs-delayed: a leader whose head misses the previous slot waits out
    // the pre-waiting window before extending anyway
    int64_t wait_until = t_begin + pre_wait;
    if (pre_wait > 0 && c_loc->sl < sl - 1 && now < wait_until) {
      park_until_ = wait_until;
      phase = Phase::PreWaiting;
      if (sv.trace) sv.trace(id, "pre-wait", "until " + std::to_string(wait_until));
      return;
    }
    build_and_account(sv, now);
  }

  void build_and_account(Services& sv, int64_t now) {
    Chain head = c_loc;
    if (now < t_begin + sv.t_run) {
      build_block(sv, now);
    } else {
      sv.kes->evolve(id, sl);  // delayed leader: the window has passed
      if (sv.trace) sv.trace(id, "late-leader", "no block after t_run");
    }
    if (t_rec) {
      AdjustRecord rec;
      rec.complete = true;
      rec.b_last_id = head->id;
      rec.b_last_sl = head->sl;
      rec.b_last_t_now = head->t_now;
      rec.t_recv = *t_rec;
      rec.party = id;
      // validators check record proofs against the measured block's slot, so
      // this round's certificate only fits when the head is from this slot;
      // prove at head->sl instead (the pending-proof path satisfies this
      // already because entries complete on heads from their own slot)
      int64_t ep_b = std::max<int64_t>(epoch_of_slot(head->sl, sv.params->R), 1);
      Digest eta_b = sv.epochs->eta(c_loc, ep_b);
      auto rec_out = sv.vrf->eval_prove(id, vrf_input(eta_b, head->sl, kVrfTest));
      rec.y = rec_out->y;
      rec.pi = rec_out->pi;
      adj_batch_.push_back(rec);
    } else {
      s_adj.push_back({sl, test_out_.y, test_out_.pi});
    }
  }

  void build_block(Services& sv, int64_t now) {
    BlockNode b;
    b.h_prev = c_loc->id;
    b.sl = sl;
    b.t_now = now;
    b.party = id;
    b.y = test_out_.y;
    b.pi = test_out_.pi;
    b.y_rho = nonce_out_.y;
    b.pi_rho = nonce_out_.pi;
    b.hflag = true;

    // greedy payload selection against the chain's balances
    StakeDist bal = balances_at(sv, c_loc);
    std::set<uint64_t> onchain_tx = tx_ids_on(c_loc);
    std::vector<Tx> kept;
    for (const Tx& t : tx_buffer) {
      if (onchain_tx.count(t.id)) continue;
      if (valid_tx(t, bal)) {
        apply_tx(bal, t);
        b.txs.push_back(t);
      } else {
        kept.push_back(t);  // stays buffered for a later block
      }
    }
    tx_buffer = std::move(kept);

    // drain measurement records not already on the chain
    std::set<Digest> onchain_adj = adjust_keys_on(c_loc);
    for (const auto& e : adjust_buffer)
      if (!onchain_adj.count(e.rec.key())) b.adjusts.emplace_back(e.rec, e.t_adj);
    adjust_buffer.clear();

    auto sig = sv.kes->sign(id, block_signing_digest(b), sl);
    assert(sig && "forward-security refusal while staking");
    b.sig = *sig;
    sv.kes->evolve(id, sl);
    c_loc = append_block(c_loc, std::move(b), sv.params->R);
    validated_.insert(c_loc->id);
    ++blocks_built;
    sv.multicast(*sv.bc, ChainMsg{c_loc}, id, now, t_next, t_round);
    if (sv.trace)
      sv.trace(id, "block", "slot " + std::to_string(sl) + " height " +
                                std::to_string(c_loc->height));
  }

  void adjust_delay(Services& sv, int64_t now) {
    for (auto it = s_adj.begin(); it != s_adj.end();) {
      bool done = false;
      for (const auto& cand : round_candidates_) {
        if (cand.chain->sl == it->sl && !cand.chain->is_genesis()) {
          AdjustRecord rec;
          rec.complete = true;
          rec.b_last_id = cand.chain->id;
          rec.b_last_sl = cand.chain->sl;
          rec.b_last_t_now = cand.chain->t_now;
          rec.t_recv = cand.d_mid;
          rec.party = id;
          rec.y = it->y;
          rec.pi = it->pi;
          adj_batch_.push_back(rec);
          done = true;
          break;
        }
      }
      if (done || sl - it->sl > 2)
        it = s_adj.erase(it);
      else
        ++it;
    }
    if (!adj_batch_.empty()) {
      sv.multicast(*sv.adjnet, AdjMsg{adj_batch_}, id, now, t_next, t_round);
      adj_batch_.clear();
    }
  }

  // stalled or time-unaware: track the chain, take no protocol actions
  void passive_listen(Services& sv, int64_t now) {
    if (!online || !is_init) return;
    fetch_information(sv, now);
    select_chain(sv, now);
    round_candidates_.clear();
  }

  // ------------------------------------------------------------- utilities

  StakeDist balances_at(Services& sv, const Chain& tip) {
    StakeDist d = sv.epochs->genesis_dist();
    std::vector<const BlockNode*> blocks;
    for (const BlockNode* n = tip.get(); n && !n->is_genesis(); n = n->parent.get())
      blocks.push_back(n);
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
      for (const Tx& t : (*it)->txs)
        if (valid_tx(t, d)) apply_tx(d, t);
    return d;
  }

  static std::set<uint64_t> tx_ids_on(const Chain& tip) {
    std::set<uint64_t> s;
    for (const BlockNode* n = tip.get(); n && !n->is_genesis(); n = n->parent.get())
      for (const Tx& t : n->txs) s.insert(t.id);
    return s;
  }

  static std::set<Digest> adjust_keys_on(const Chain& tip) {
    std::set<Digest> s;
    for (const BlockNode* n = tip.get(); n && !n->is_genesis(); n = n->parent.get())
      for (const auto& [r, t] : n->adjusts) {
        (void)t;
        s.insert(r.key());
      }
    return s;
  }

  std::optional<int64_t> report_value() const {
    if (is_init && synchronized && operational && online) return t_next;
    return std::nullopt;
  }

  void report(Services& sv, std::optional<int64_t> v) {
    if (time_aware && !corrupted) sv.clock->report(id, v);
  }

  // activation-spanning scratch state
  int64_t park_until_ = 0;
  bool sync_on_wake_ = false;
  bool join_got_chain_ = false;
  bool welcome_pending_ = false;
  std::vector<ChainCandidate> round_candidates_;
  std::vector<AdjustRecord> adj_batch_;
  VrfRegistry::Output nonce_out_;
  VrfRegistry::Output test_out_;
  std::set<uint64_t> tx_seen_;
  std::set<Digest> adj_seen_;
  std::set<Digest> validated_;
};

}  // namespace autosyn
