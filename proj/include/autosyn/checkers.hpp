#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chain.hpp"
#include "charstring.hpp"
#include "network.hpp"

namespace autosyn {

// chain-selection snapshots taken at slot onsets, plus end-of-run chains; the
// security-property checkers run over this after the simulation finishes
struct OnsetSnapshot {
  int64_t sl = 0;
  int64_t t_begin = 0;
  std::vector<std::pair<int, Chain>> alert;  // (party, selected chain)
};

struct CheckInput {
  std::vector<OnsetSnapshot> onsets;                // ascending sl
  std::vector<std::pair<int, Chain>> final_chains;  // alert parties at end of run
  Chain reference;                                  // first alert party's final chain
  int64_t max_slot = 0;
};

struct Violation {
  std::string property;
  int64_t sl1 = -1;
  int64_t sl2 = -1;
  int p1 = -1;
  int p2 = -1;
  std::string detail;
};

inline constexpr size_t kMaxViolationsPerProperty = 64;

// common prefix: a chain committed k blocks deep at some onset must remain a
// prefix of every chain selected at the same or a later onset. Commitments
// stay totally ordered while the property holds, so checking against the
// deepest one seen suffices.
inline std::vector<Violation> check_cp(const CheckInput& in, int64_t k) {
  std::vector<Violation> out;
  const BlockNode* deepest = nullptr;
  int64_t deep_sl = -1;
  int deep_party = -1;
  auto commit = [&](const Chain& c) -> const BlockNode* {
    if (c->height <= k) return nullptr;  // commitment at genesis: vacuous
    const BlockNode* n = c.get();
    for (int64_t i = 0; i < k; ++i) n = n->parent.get();
    return n;
  };
  for (const auto& snap : in.onsets) {
    for (const auto& [p, c] : snap.alert) {
      if (deepest && !is_ancestor(deepest, c.get()) && out.size() < kMaxViolationsPerProperty)
        out.push_back({"CP", deep_sl, snap.sl, deep_party, p, "committed block abandoned"});
    }
    const BlockNode* slot_deepest = deepest;
    int64_t sd_sl = deep_sl;
    int sd_party = deep_party;
    for (const auto& [p, c] : snap.alert) {
      const BlockNode* n = commit(c);
      if (n && (!slot_deepest || n->height > slot_deepest->height)) {
        slot_deepest = n;
        sd_sl = snap.sl;
        sd_party = p;
      }
    }
    if (slot_deepest != deepest) {
      // same-slot cross check against the new deepest commitment
      for (const auto& [p, c] : snap.alert)
        if (!is_ancestor(slot_deepest, c.get()) && out.size() < kMaxViolationsPerProperty)
          out.push_back({"CP", snap.sl, snap.sl, sd_party, p, "same-onset commitment conflict"});
      deepest = slot_deepest;
      deep_sl = sd_sl;
      deep_party = sd_party;
    }
  }
  return out;
}

// chain growth as window density on one chain: every slot window of length
// >= s must contain at least tau * |window| blocks
inline std::vector<Violation> check_cg(const CheckInput& in, double tau, int64_t s) {
  std::vector<Violation> out;
  if (!in.reference || in.max_slot <= s) return out;
  const int64_t n = in.max_slot;
  std::vector<int64_t> cnt(n + 1, 0);  // blocks with slot <= i
  for (const BlockNode* b = in.reference.get(); b && !b->is_genesis(); b = b->parent.get())
    if (b->sl <= n) ++cnt[b->sl];
  for (int64_t i = 1; i <= n; ++i) cnt[i] += cnt[i - 1];
  double best = cnt[0];  // g[sl1] = cnt[sl1] - tau*sl1, maximized over sl1 <= sl2 - s
  int64_t best_at = 0;
  for (int64_t sl2 = s; sl2 <= n; ++sl2) {
    double g1 = cnt[sl2 - s] - tau * (sl2 - s);
    if (g1 > best) {
      best = g1;
      best_at = sl2 - s;
    }
    double g2 = cnt[sl2] - tau * sl2;
    if (g2 < best - 1e-9 && out.size() < kMaxViolationsPerProperty)
      out.push_back({"CG", best_at, sl2, -1, -1,
                     "window gained " + std::to_string(cnt[sl2] - cnt[best_at]) + " blocks"});
  }
  return out;
}

// chain growth between alert snapshots: any two onsets s apart must show
// tau * distance growth in chain length
inline std::vector<Violation> check_cg2(const CheckInput& in, double tau, int64_t s) {
  std::vector<Violation> out;
  struct SlotLen {
    int64_t sl;
    int64_t lmin, lmax;
    int pmin, pmax;
  };
  std::vector<SlotLen> lens;
  for (const auto& snap : in.onsets) {
    if (snap.alert.empty()) continue;
    SlotLen e{snap.sl, INT64_MAX, INT64_MIN, -1, -1};
    for (const auto& [p, c] : snap.alert) {
      if (c->height < e.lmin) {
        e.lmin = c->height;
        e.pmin = p;
      }
      if (c->height > e.lmax) {
        e.lmax = c->height;
        e.pmax = p;
      }
    }
    lens.push_back(e);
  }
  size_t lo = 0;
  double best = -1e18;
  int64_t best_sl = -1;
  int best_party = -1;
  for (const auto& e : lens) {
    while (lo < lens.size() && lens[lo].sl + s <= e.sl) {
      double g = lens[lo].lmax - tau * lens[lo].sl;
      if (g > best) {
        best = g;
        best_sl = lens[lo].sl;
        best_party = lens[lo].pmax;
      }
      ++lo;
    }
    if (best_sl >= 0 && e.lmin - tau * e.sl < best - 1e-9 && out.size() < kMaxViolationsPerProperty)
      out.push_back({"CG2", best_sl, e.sl, best_party, e.pmin, "insufficient growth"});
  }
  return out;
}

// chain quality: every portion of at least k consecutive blocks on a final
// alert chain carries at least mu * len alert-origin blocks
inline std::vector<Violation> check_cq(const CheckInput& in, double mu, int64_t k) {
  std::vector<Violation> out;
  std::vector<Digest> seen;
  for (const auto& [party, chain] : in.final_chains) {
    bool dup = false;
    for (const auto& d : seen) dup = dup || d == chain->id;
    if (dup) continue;
    seen.push_back(chain->id);
    std::vector<const BlockNode*> blocks;
    for (const BlockNode* b = chain.get(); b && !b->is_genesis(); b = b->parent.get())
      blocks.push_back(b);
    std::reverse(blocks.begin(), blocks.end());
    const int64_t n = static_cast<int64_t>(blocks.size());
    std::vector<int64_t> hon(n + 1, 0);
    for (int64_t i = 0; i < n; ++i) hon[i + 1] = hon[i] + (blocks[i]->hflag ? 1 : 0);
    for (int64_t len = k; len <= n; ++len)
      for (int64_t i = 0; i + len <= n; ++i) {
        int64_t h = hon[i + len] - hon[i];
        if (h < mu * len - 1e-9 && out.size() < kMaxViolationsPerProperty)
          out.push_back({"CQ", blocks[i]->sl, blocks[i + len - 1]->sl, party, party,
                         std::to_string(h) + "/" + std::to_string(len) + " alert blocks"});
      }
  }
  return out;
}

// existential chain quality: every s-slot window on the reference chain holds
// at least one alert-origin block (minimal windows cover the larger ones)
inline std::vector<Violation> check_ecq(const CheckInput& in, int64_t s) {
  std::vector<Violation> out;
  if (!in.reference || in.max_slot < s) return out;
  const int64_t n = in.max_slot;
  std::vector<int64_t> hon(n + 1, 0);
  for (const BlockNode* b = in.reference.get(); b && !b->is_genesis(); b = b->parent.get())
    if (b->sl <= n && b->hflag) ++hon[b->sl];
  for (int64_t i = 1; i <= n; ++i) hon[i] += hon[i - 1];
  for (int64_t sl1 = 0; sl1 + s <= n; ++sl1)
    if (hon[sl1 + s] - hon[sl1] == 0 && out.size() < kMaxViolationsPerProperty)
      out.push_back({"ECQ", sl1, sl1 + s, -1, -1, "no alert block in window"});
  return out;
}

// ------------------------------------------------------------- image audit

// Two-slot micro-scenarios driven through a real diffusion instance: an
// honest (or adversarial) leader in each slot, a silent observer judging the
// final chain. Verifies the admissible delay images of each base pair and the
// per-slot survival rate of honest slots.
struct Lemma3Case {
  std::string base;
  std::map<std::string, int64_t> images;
  int64_t draws = 0;
  int64_t disallowed = 0;
  double p_stay = -1;  // fraction of draws where the slot-1 honest block survived
  double bound = 0;    // eta - 3 sigma
  bool ok = true;
};

inline std::vector<Lemma3Case> lemma3_case_audit(double eta, int64_t draws, uint64_t seed) {
  const int64_t t_round = 10;
  Genesis g;
  g.eta1 = Hasher(1).u64(7).finish();
  g.t_round1 = t_round;
  for (int p = 1; p <= 3; ++p) g.stakes.push_back({p, Digest{}, Digest{}, 1});
  g.compute_id();
  Chain root = make_genesis_node(g);

  std::vector<Lemma3Case> table;
  const char* bases[4] = {"00", "01", "10", "11"};
  for (int bi = 0; bi < 4; ++bi) {
    Lemma3Case row;
    row.base = bases[bi];
    row.draws = draws;
    bool a_honest = row.base[0] == '0';
    bool b_honest = row.base[1] == '0';
    for (int64_t d = 0; d < draws; ++d) {
      Diffusion net("bc", Rng::derive_seed(seed, row.base + std::to_string(d)), eta);
      for (int p = 1; p <= 3; ++p) net.register_party(p);
      // only the slot-1 honest multicast draws randomly
      net.forced_rd = [](int sender, int) -> std::optional<int> {
        return sender == 1 ? std::nullopt : std::optional<int>(kRdOnTimeUnset);
      };

      auto mk = [&](const Chain& parent, int64_t sl, int64_t t, int party, bool hf) {
        BlockNode b;
        b.h_prev = parent->id;
        b.sl = sl;
        b.t_now = t;
        b.party = party;
        b.hflag = hf;
        return append_block(parent, std::move(b), 100);
      };

      Chain b1 = mk(root, 1, 0, 1, a_honest);
      if (a_honest)
        net.honest_multicast(1, ChainMsg{b1}, 0, t_round, t_round);
      else
        for (int p : {2, 3}) net.adversarial_multicast(1, ChainMsg{b1}, p, kRdOnTimeSet, 0, 0, t_round);
      net.promote_unattended();

      auto fold = [&](Chain& loc, int party, int64_t now) {
        net.promote_deadlines(now);
        for (auto& f : net.fetch(party, now)) {
          const Chain& c = std::get<ChainMsg>(f.m).chain;
          if (c->height > loc->height) loc = c;
        }
      };

      Chain c2 = root;
      fold(c2, 2, t_round);
      Chain b2 = b_honest ? mk(c2, 2, t_round, 2, true) : mk(root, 2, t_round, 2, false);
      if (b_honest)
        net.honest_multicast(2, ChainMsg{b2}, t_round, 2 * t_round, t_round);
      else
        for (int p : {2, 3})
          net.adversarial_multicast(2, ChainMsg{b2}, p, kRdOnTimeSet, t_round, t_round, t_round);
      net.promote_unattended();

      Chain c3 = root;
      for (int64_t t = 1; t <= 4; ++t) fold(c3, 3, t * t_round);

      auto on_chain = [&](const Chain& b) {
        for (const BlockNode* n = c3.get(); n && !n->is_genesis(); n = n->parent.get())
          if (n->id == b->id) return true;
        return false;
      };
      std::string img;
      img += a_honest ? (on_chain(b1) ? '0' : '_') : '1';
      img += b_honest ? (on_chain(b2) ? '0' : '_') : '1';
      row.images[img] += 1;
      bool allowed = (a_honest ? (img[0] == '0' || img[0] == '_') : img[0] == '1') &&
                     (b_honest ? (img[1] == '0' || img[1] == '_') : img[1] == '1');
      if (!allowed) ++row.disallowed;
    }
    if (a_honest) {
      int64_t stay = 0;
      for (const auto& [img, n] : row.images)
        if (img[0] == '0') stay += n;
      row.p_stay = static_cast<double>(stay) / draws;
      row.bound = eta - 3.0 * std::sqrt(eta * (1.0 - eta) / draws);
      row.ok = row.disallowed == 0 && row.p_stay >= row.bound;
    } else {
      row.ok = row.disallowed == 0;
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace autosyn
