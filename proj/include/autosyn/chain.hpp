#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "crypto.hpp"
#include "hash.hpp"

namespace autosyn {

// ---------------------------------------------------------------- parameters

struct ChainParams {
  int64_t R = 100;        // slots per epoch
  double f = 0.05;        // active-slot coefficient
  int l_vrf = 32;         // VRF output bits
  int64_t k_sel = 50;     // selection security parameter (maxvalid-bg fork cap)
  int64_t s_sel = 0;      // density window; 0 -> derived as k_sel/(4f)
  int64_t pre_wait = -1;  // leader pre-waiting ticks; -1 derives t_run/2

  int64_t density_window() const {
    return s_sel > 0 ? s_sel : static_cast<int64_t>(std::llround(k_sel / (4.0 * f)));
  }
};

inline double phi(double f, double alpha) { return 1.0 - std::pow(1.0 - f, alpha); }

// leadership threshold: y < T  with  T = floor(2^l_vrf * phi_f(alpha))
inline uint64_t leadership_threshold(double f, double alpha, int l_vrf) {
  return static_cast<uint64_t>(std::floor(std::ldexp(1.0, l_vrf) * phi(f, alpha)));
}

// ------------------------------------------------------------------ payloads

struct Tx {
  uint64_t id = 0;
  bool transfer = false;  // opaque payload unless set
  int from = -1;
  int to = -1;
  int64_t amount = 0;

  void absorb(Hasher& h) const {
    h.u64(id).u64(transfer ? 1 : 0).i64(from).i64(to).i64(amount);
  }
};

// On-chain delay measurement. The ⊥-form (complete=false) exists only inside a
// party's pending set and is never multicast or embedded.
struct AdjustRecord {
  bool complete = false;
  Digest b_last_id;
  int64_t b_last_sl = 0;
  int64_t b_last_t_now = 0;
  int64_t t_recv = 0;
  int party = -1;
  uint64_t y = 0;
  Digest pi;

  Digest key() const {
    return Hasher(0x61646a52)  // "adjR"
        .u64(complete ? 1 : 0)
        .digest(b_last_id)
        .i64(b_last_sl)
        .i64(b_last_t_now)
        .i64(t_recv)
        .i64(party)
        .u64(y)
        .digest(pi)
        .finish();
  }
  void absorb(Hasher& h) const {
    h.u64(complete ? 1 : 0).digest(b_last_id).i64(b_last_sl).i64(b_last_t_now);
    h.i64(t_recv).i64(party).u64(y).digest(pi);
  }
};

// ------------------------------------------------------------------- genesis

struct GenesisEntry {
  int party = -1;
  Digest vrf_vk;
  Digest kes_vk;
  int64_t stake = 0;
};

struct Genesis {
  std::vector<GenesisEntry> stakes;  // S_1
  Digest eta1;
  int64_t t_start = 0;
  int64_t t_round1 = 0;
  Digest id;

  int64_t total_stake() const {
    int64_t t = 0;
    for (const auto& e : stakes) t += e.stake;
    return t;
  }
  void compute_id() {
    Hasher h(0x67656e42);  // "genB"
    h.digest(eta1).i64(t_start).i64(t_round1).u64(stakes.size());
    for (const auto& e : stakes) h.i64(e.party).digest(e.vrf_vk).digest(e.kes_vk).i64(e.stake);
    id = h.finish();
  }
  const GenesisEntry* entry(int party) const {
    for (const auto& e : stakes)
      if (e.party == party) return &e;
    return nullptr;
  }
};

// -------------------------------------------------------------------- blocks

struct BlockNode;
using Chain = std::shared_ptr<const BlockNode>;

struct BlockNode {
  Digest id;
  Digest h_prev;
  int64_t sl = 0;
  int64_t t_now = 0;
  int party = -1;
  uint64_t y = 0;       // crt leadership output
  Digest pi;            // crt proof
  uint64_t y_rho = 0;   // nonce-contribution output
  Digest pi_rho;        // nonce proof
  std::vector<std::pair<AdjustRecord, int64_t>> adjusts;  // (record, T_adj)
  std::vector<Tx> txs;
  Digest sig;
  bool hflag = false;  // alert origin; simulator metadata, never hashed

  Chain parent;                              // null for genesis
  const BlockNode* epoch_boundary = nullptr;  // last block with sl <= (ep-1)R
  int64_t height = 0;
  int64_t ep = 0;  // ceil(sl/R); 0 for genesis
  int64_t honest_count = 0;
  bool epochs_ok = true;  // no completed epoch this chain spans is empty

  bool is_genesis() const { return parent == nullptr; }
};

inline int64_t epoch_of_slot(int64_t sl, int64_t R) { return sl <= 0 ? 0 : (sl + R - 1) / R; }

// message digest covered by the KES signature
inline Digest block_signing_digest(const BlockNode& b) {
  Hasher h(0x626c6b4d);  // "blkM"
  h.digest(b.h_prev).i64(b.sl).i64(b.t_now).i64(b.party);
  h.u64(b.y).digest(b.pi).u64(b.y_rho).digest(b.pi_rho);
  h.u64(b.adjusts.size());
  for (const auto& [rec, t_adj] : b.adjusts) {
    rec.absorb(h);
    h.i64(t_adj);
  }
  h.u64(b.txs.size());
  for (const auto& tx : b.txs) tx.absorb(h);
  return h.finish();
}

inline Chain make_genesis_node(const Genesis& g) {
  auto n = std::make_shared<BlockNode>();
  n->id = g.id;
  n->sl = 0;
  n->t_now = 0;
  n->height = 0;
  n->ep = 0;
  n->epochs_ok = true;
  return n;
}

// Fills derived fields (id, height, cumulative flags). h_prev/sig/crt must be
// set by the caller before appending.
inline Chain append_block(const Chain& parent, BlockNode b, int64_t R) {
  b.parent = parent;
  b.height = parent->height + 1;
  b.ep = epoch_of_slot(b.sl, R);
  b.honest_count = parent->honest_count + (b.hflag ? 1 : 0);
  // an epoch jump > 1 leaves a completed epoch with no block
  b.epochs_ok = parent->epochs_ok && b.ep <= std::max<int64_t>(parent->ep, 0) + 1;
  if (parent->is_genesis() || b.ep > parent->ep)
    b.epoch_boundary = parent.get();
  else
    b.epoch_boundary = parent->epoch_boundary;
  b.id = Hasher(0x626c6b49).digest(block_signing_digest(b)).digest(b.sig).finish();  // "blkI"
  return std::make_shared<const BlockNode>(std::move(b));
}

// last block with sl <= slot (possibly the genesis node)
inline const BlockNode* last_block_at_or_before(const Chain& tip, int64_t slot) {
  const BlockNode* n = tip.get();
  while (n && n->sl > slot) {
    if (n->epoch_boundary && n->epoch_boundary->sl > slot)
      n = n->epoch_boundary;
    else
      n = n->parent.get();
  }
  return n;
}

// blocks with sl in [lo, hi], ascending slot order
inline std::vector<const BlockNode*> blocks_in_slot_range(const Chain& tip, int64_t lo, int64_t hi) {
  std::vector<const BlockNode*> out;
  const BlockNode* n = last_block_at_or_before(tip, hi);
  while (n && !n->is_genesis() && n->sl >= lo) {
    out.push_back(n);
    n = n->parent.get();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline const BlockNode* lowest_common_ancestor(const BlockNode* a, const BlockNode* b) {
  while (a->height > b->height) a = a->parent.get();
  while (b->height > a->height) b = b->parent.get();
  while (a != b) {
    a = a->parent.get();
    b = b->parent.get();
  }
  return a;
}

inline bool is_ancestor(const BlockNode* anc, const BlockNode* tip) {
  while (tip->height > anc->height) tip = tip->parent.get();
  return tip == anc;
}

// --------------------------------------------------------------- stake state

struct StakeDist {
  std::vector<int64_t> by_party;  // indexed by party id
  int64_t total = 0;

  int64_t stake_of(int party) const {
    return party >= 0 && party < static_cast<int>(by_party.size()) ? by_party[party] : 0;
  }
  double alpha(int party) const {
    return total > 0 ? static_cast<double>(stake_of(party)) / static_cast<double>(total) : 0.0;
  }
};

inline StakeDist genesis_stake_dist(const Genesis& g) {
  StakeDist d;
  int max_id = -1;
  for (const auto& e : g.stakes) max_id = std::max(max_id, e.party);
  d.by_party.assign(max_id + 1, 0);
  for (const auto& e : g.stakes) d.by_party[e.party] += e.stake;
  d.total = g.total_stake();
  return d;
}

inline bool valid_tx(const Tx& tx, const StakeDist& balances) {
  if (!tx.transfer) return true;
  if (tx.amount < 0) return false;
  return balances.stake_of(tx.from) >= tx.amount && tx.to >= 0 &&
         tx.to < static_cast<int>(balances.by_party.size());
}

inline void apply_tx(StakeDist& balances, const Tx& tx) {
  if (!tx.transfer) return;
  balances.by_party[tx.from] -= tx.amount;
  balances.by_party[tx.to] += tx.amount;
}

// ------------------------------------------------------- epoch-derived state

struct AdjustmentWindowLog {
  int64_t n_records = 0;
  double mean_ta = 0;
  double mean_tb = 0;
  double v = 0;            // omega-weighted deviation for this window
  int64_t negative_tb = 0;  // organically common; flagged, not rejected
  bool used = false;
};

struct AdjustmentLog {
  int64_t ep = 0;
  AdjustmentWindowLog window[2];
  double v = 0;  // averaged deviation actually applied
  int64_t t_round_in = 0;
  int64_t t_round_out = 0;
};

// Epoch-indexed chain state. All lookups are pure functions of the chain
// prefix below the relevant epoch boundary; caches are keyed by the boundary
// block id so distinct chains sharing a prefix share entries.
class EpochContext {
 public:
  EpochContext(const Genesis* g, const ChainParams* p) : g_(g), p_(p) {}

  const Genesis& genesis() const { return *g_; }
  const ChainParams& params() const { return *p_; }

  // stake distribution used in epoch ep: genesis for ep<=2, else the
  // distribution at the end of epoch ep-2
  const StakeDist& stake_dist(const Chain& tip, int64_t ep) {
    if (ep <= 2) return genesis_dist();
    const BlockNode* b = last_block_at_or_before(tip, (ep - 2) * p_->R);
    auto key = std::make_pair(b->id, ep);
    auto it = stake_cache_.find(key);
    if (it != stake_cache_.end()) return it->second;
    StakeDist d = genesis_dist();
    std::vector<const BlockNode*> blocks;
    for (const BlockNode* n = b; n && !n->is_genesis(); n = n->parent.get()) blocks.push_back(n);
    std::reverse(blocks.begin(), blocks.end());
    for (const BlockNode* n : blocks)
      for (const auto& tx : n->txs)
        if (valid_tx(tx, d)) apply_tx(d, tx);
    return stake_cache_.emplace(key, std::move(d)).first->second;
  }

  // epoch randomness: eta_1 from genesis; eta_ep = H(eta_{ep-1} || ep || v)
  // with v the nonce outputs of blocks in the first 2R/3 slots of epoch ep-1
  Digest eta(const Chain& tip, int64_t ep) {
    if (ep <= 1) return g_->eta1;
    int64_t hi = (ep - 2) * p_->R + (2 * p_->R) / 3;
    const BlockNode* b = last_block_at_or_before(tip, hi);
    auto key = std::make_pair(b->id, ep);
    auto it = eta_cache_.find(key);
    if (it != eta_cache_.end()) return it->second;
    Digest prev = eta(tip, ep - 1);
    Hasher h(0x65746148);  // "etaH"
    h.digest(prev).i64(ep);
    for (const BlockNode* n : blocks_in_slot_range(tip, (ep - 2) * p_->R + 1, hi)) h.u64(n->y_rho);
    return eta_cache_.emplace(key, h.finish()).first->second;
  }

  // per-epoch round lengths 1..upto (index 0 unused)
  std::vector<int64_t> round_lengths(const Chain& tip, int64_t upto,
                                     std::vector<AdjustmentLog>* logs = nullptr) {
    std::vector<int64_t> len(std::max<int64_t>(upto + 1, 2), 0);
    len[1] = g_->t_round1;
    for (int64_t e = 2; e <= upto; ++e) {
      AdjustmentLog log;
      len[e] = adjusted_round_length(tip, e, len, logs ? &log : nullptr);
      if (logs) logs->push_back(log);
    }
    return len;
  }

  // round length for epoch ep from the two measurement windows (B.13 as a
  // clamped delta; see the adjustment log for the literal per-window values)
  int64_t adjusted_round_length(const Chain& tip, int64_t ep, const std::vector<int64_t>& len,
                                AdjustmentLog* log_out) {
    const int64_t R = p_->R;
    const int64_t half = R / 2;
    const int64_t hi1 = (ep - 2) * R + half;
    const BlockNode* bnd = last_block_at_or_before(tip, hi1);
    auto key = std::make_pair(bnd->id, ep);
    if (!log_out) {
      auto it = length_cache_.find(key);
      if (it != length_cache_.end()) return it->second;
    }

    AdjustmentLog log;
    log.ep = ep;
    log.t_round_in = len[ep - 1];
    std::set<Digest> seen;
    double v_sum = 0;
    int used = 0;
    for (int j = 0; j < 2; ++j) {
      int64_t lo, hi, t_ref;
      if (j == 0) {  // first half of epoch ep-1
        lo = (ep - 2) * R + 1;
        hi = hi1;
        t_ref = len[ep - 1];
      } else {  // last half of epoch ep-2; absent when the last epoch is the first
        if (ep - 1 <= 1) continue;
        lo = (ep - 2) * R - half + 1;
        hi = (ep - 2) * R;
        t_ref = len[ep - 2];
      }
      int64_t n = 0, neg = 0;
      int64_t sum_a = 0, sum_b = 0;
      for (const BlockNode* blk : blocks_in_slot_range(tip, lo, hi)) {
        for (const auto& [rec, t_adj] : blk->adjusts) {
          if (!rec.complete) continue;
          if (!seen.insert(rec.key()).second) continue;  // first occurrence only
          int64_t ta = rec.t_recv - rec.b_last_t_now;
          if (ta > 2 * t_ref) continue;
          int64_t tb = rec.t_recv - t_adj;
          if (tb < 0) ++neg;
          sum_a += ta;
          sum_b += tb;
          ++n;
        }
      }
      auto& w = log.window[j];
      w.n_records = n;
      w.negative_tb = neg;
      if (n > 0) {
        w.mean_ta = static_cast<double>(sum_a) / n;
        w.mean_tb = static_cast<double>(sum_b) / n;
        w.v = 0.3 * (w.mean_ta - t_ref) + 0.1 * (w.mean_tb - t_ref);
        w.used = true;
        v_sum += w.v;
        ++used;
      }
    }
    log.v = used > 0 ? v_sum / used : 0.0;
    int64_t cur = len[ep - 1];
    int64_t next = static_cast<int64_t>(std::llround(cur + log.v));
    next = std::clamp(next, std::max<int64_t>(1, cur / 2), 2 * cur);
    log.t_round_out = next;
    if (log_out) *log_out = log;
    length_cache_[key] = next;
    return next;
  }

  const StakeDist& genesis_dist() {
    if (!gen_dist_) gen_dist_ = genesis_stake_dist(*g_);
    return *gen_dist_;
  }

 private:
  const Genesis* g_;
  const ChainParams* p_;
  std::optional<StakeDist> gen_dist_;
  std::map<std::pair<Digest, int64_t>, StakeDist> stake_cache_;
  std::map<std::pair<Digest, int64_t>, Digest> eta_cache_;
  std::map<std::pair<Digest, int64_t>, int64_t> length_cache_;
};

// ------------------------------------------------------------ slot arithmetic

// start tick of a slot under a round-length table
inline int64_t slot_start(const std::vector<int64_t>& len, int64_t R, int64_t sl) {
  int64_t ep = epoch_of_slot(sl, R);
  int64_t t = 0;
  for (int64_t e = 1; e < ep; ++e) t += R * len[e];
  return t + (sl - 1 - (ep - 1) * R) * len[ep];
}

struct SlotInfo {
  int64_t sl = 0;
  int64_t t_next = 0;
  int64_t t_round = 0;
  int64_t ep = 0;
};

// Time-to-slot resolution for (re)synchronizing parties. Boundary convention:
// a tick equal to a slot boundary belongs to the slot that starts there,
// matching the incremental tracker (FinishRound wakes at t_now == t_next and
// then advances). epoch walk caps at the epoch containing t_now.
inline SlotInfo current_slot_number(EpochContext& ctx, const Chain& tip, int64_t t_now) {
  const Genesis& g = ctx.genesis();
  const int64_t R = ctx.params().R;
  if (t_now <= 0) return {0, 0, g.t_round1, 0};  // genesis round
  int64_t t0 = 0, sl = 0;
  int64_t tr = g.t_round1;
  if (t0 + tr * R > t_now) {
    int64_t d = (t_now - t0) / tr + 1;
    return {d, t0 + d * tr, tr, 1};
  }
  t0 += tr * R;
  sl = R;
  std::vector<int64_t> len{0, g.t_round1};
  for (int64_t e = 2;; ++e) {
    len.push_back(ctx.adjusted_round_length(tip, e, len, nullptr));
    tr = len[e];
    if (t0 + tr * R <= t_now) {
      t0 += tr * R;
      sl += R;
      continue;
    }
    int64_t d = (t_now - t0) / tr + 1;
    return {sl + d, t0 + d * tr, tr, e};
  }
}

// --------------------------------------------------------------- validation

struct ValidationResult {
  bool ok = true;
  std::string reason;  // badhash / badvrf / badsig / badadj / future-block / ...
  Digest block;
};

inline const char* kVrfTest = "TEST";
inline const char* kVrfNonce = "NONCE";

inline Digest vrf_input(const Digest& eta, int64_t sl, const char* tag) {
  return Hasher(0x76726649).digest(eta).i64(sl).str(tag).finish();  // "vrfI"
}

// chain validator with a shared valid/invalid memo (a block's validity is a
// pure function of its own ancestry, so memoization by block id is sound)
class ChainValidator {
 public:
  ChainValidator(EpochContext* ctx, const VrfRegistry* vrf, const KesRegistry* kes)
      : ctx_(ctx), vrf_(vrf), kes_(kes) {}

  // scripted leadership for the figure scenarios: slot -> party; when present
  // it replaces the y < T test (consistently here and in staking)
  void set_leader_override(const std::map<int64_t, int>* ov) { leader_override_ = ov; }
  const std::map<int64_t, int>* leader_override() const { return leader_override_; }

  ValidationResult validate(const Chain& tip, int64_t now) {
    if (tip->epochs_ok == false) return fail("empty-epoch", tip->id);
    if (tip->t_now > now && !tip->is_genesis()) return fail("future-block", tip->id);

    std::vector<const BlockNode*> suffix;
    const BlockNode* n = tip.get();
    while (!n->is_genesis()) {
      if (valid_.count(n->id)) break;
      if (invalid_.count(n->id)) return fail(invalid_.at(n->id), n->id);
      suffix.push_back(n);
      n = n->parent.get();
    }
    if (n->is_genesis() && n->id != ctx_->genesis().id) return fail("bad-genesis", n->id);

    std::vector<int64_t> lengths;
    for (auto it = suffix.rbegin(); it != suffix.rend(); ++it) {
      ValidationResult r = validate_block(tip, **it, lengths);
      if (!r.ok) {
        invalid_.emplace((*it)->id, r.reason);
        return r;
      }
      valid_.insert((*it)->id);
    }
    return {};
  }

 private:
  ValidationResult validate_block(const Chain& tip, const BlockNode& b,
                                  std::vector<int64_t>& lengths) {
    const BlockNode& parent = *b.parent;
    if (b.h_prev != parent.id) return fail("badhash", b.id);
    if (b.sl <= parent.sl) return fail("badorder-slot", b.id);
    if (b.t_now <= parent.t_now && !parent.is_genesis()) return fail("badorder-time", b.id);

    const ChainParams& p = ctx_->params();
    if (static_cast<int64_t>(lengths.size()) <= b.ep)
      lengths = ctx_->round_lengths(b.parent, b.ep);  // prefix below b only
    int64_t begin = slot_start(lengths, p.R, b.sl);
    if (b.t_now < begin || b.t_now >= begin + lengths[b.ep])
      return fail("badtime-interval", b.id);

    const GenesisEntry* ge = ctx_->genesis().entry(b.party);
    if (!ge) return fail("badparty", b.id);

    const StakeDist& dist = ctx_->stake_dist(tip, b.ep);
    Digest eta = ctx_->eta(tip, b.ep);
    Digest in_test = vrf_input(eta, b.sl, kVrfTest);
    Digest in_nonce = vrf_input(eta, b.sl, kVrfNonce);
    if (!vrf_->verify(ge->vrf_vk, in_test, b.y, b.pi)) return fail("badvrf", b.id);
    if (!vrf_->verify(ge->vrf_vk, in_nonce, b.y_rho, b.pi_rho)) return fail("badvrf-nonce", b.id);
    if (leader_override_) {
      auto it = leader_override_->find(b.sl);
      if (it == leader_override_->end() || it->second != b.party) return fail("badvrf", b.id);
    } else {
      uint64_t T = leadership_threshold(p.f, dist.alpha(b.party), p.l_vrf);
      if (b.y >= T) return fail("badvrf", b.id);
    }

    if (!kes_->verify(ge->kes_vk, block_signing_digest(b), b.sl, b.sig)) return fail("badsig", b.id);

    for (const auto& [rec, t_adj] : b.adjusts) {
      (void)t_adj;
      if (!rec.complete) return fail("badadj", b.id);
      const GenesisEntry* re = ctx_->genesis().entry(rec.party);
      if (!re) return fail("badadj", b.id);
      int64_t rec_ep = epoch_of_slot(rec.b_last_sl, p.R);
      Digest rec_eta = ctx_->eta(tip, std::max<int64_t>(rec_ep, 1));
      Digest rec_in = vrf_input(rec_eta, rec.b_last_sl, kVrfTest);
      if (!vrf_->verify(re->vrf_vk, rec_in, rec.y, rec.pi)) return fail("badadj", b.id);
      if (duplicated_on_chain(b, rec)) return fail("badadj", b.id);
    }
    return {};
  }

  static bool duplicated_on_chain(const BlockNode& b, const AdjustRecord& rec) {
    Digest k = rec.key();
    int hits = 0;
    for (const auto& [r2, t2] : b.adjusts) {
      (void)t2;
      if (r2.key() == k) ++hits;
    }
    if (hits > 1) return true;
    for (const BlockNode* n = b.parent.get(); n && !n->is_genesis(); n = n->parent.get())
      for (const auto& [r2, t2] : n->adjusts) {
        (void)t2;
        if (r2.key() == k) return true;
      }
    return false;
  }

  static ValidationResult fail(std::string reason, const Digest& id) {
    return {false, std::move(reason), id};
  }

  EpochContext* ctx_;
  const VrfRegistry* vrf_;
  const KesRegistry* kes_;
  const std::map<int64_t, int>* leader_override_ = nullptr;
  std::unordered_set<Digest, DigestHash> valid_;
  std::unordered_map<Digest, std::string, DigestHash> invalid_;
};

// ------------------------------------------------------------ chain selection

struct ChainCandidate {
  Chain chain;
  int64_t d_mid = 0;   // network delivery time (receive-time bookkeeping)
  uint64_t seq = 0;    // arrival order
};

inline int64_t blocks_in_window(const Chain& tip, int64_t lo_sl, int64_t hi_sl) {
  int64_t n = 0;
  const BlockNode* b = last_block_at_or_before(tip, hi_sl);
  while (b && !b->is_genesis() && b->sl >= lo_sl) {
    ++n;
    b = b->parent.get();
  }
  return n;
}

// longest chain; ties keep the current selection (candidates must be passed in
// arrival order with the local chain folded in first)
inline const ChainCandidate* maxvalid_mc(const Chain& local, const std::vector<ChainCandidate>& cands) {
  const ChainCandidate* best = nullptr;
  int64_t best_h = local->height;
  for (const auto& c : cands)
    if (c.chain->height > best_h) {
      best = &c;
      best_h = c.chain->height;
    }
  return best;
}

// longest for shallow forks (<= k_sel blocks rolled back), denser window after
// the fork point for deep forks
inline const ChainCandidate* maxvalid_bg(const Chain& local, const std::vector<ChainCandidate>& cands,
                                         const ChainParams& p) {
  Chain best = local;
  const ChainCandidate* winner = nullptr;
  const int64_t s = p.density_window();
  for (const auto& c : cands) {
    const BlockNode* fork = lowest_common_ancestor(best.get(), c.chain.get());
    int64_t rollback = best->height - fork->height;
    bool adopt;
    if (rollback <= p.k_sel) {
      adopt = c.chain->height > best->height;
    } else {
      int64_t lo = fork->sl + 1, hi = fork->sl + s;
      adopt = blocks_in_window(c.chain, lo, hi) > blocks_in_window(best, lo, hi);
    }
    if (adopt) {
      best = c.chain;
      winner = &c;
    }
  }
  return winner;
}

}  // namespace autosyn
