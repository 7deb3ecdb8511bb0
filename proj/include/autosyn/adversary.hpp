#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "crypto.hpp"
#include "network.hpp"
#include "rng.hpp"

namespace autosyn {

// What a strategy may touch. Delay injection goes straight to the Diffusion
// instances; chain building uses the same registries honest parties use.
struct AdversaryView {
  Diffusion* bc = nullptr;
  Diffusion* txnet = nullptr;
  Diffusion* adjnet = nullptr;
  Diffusion* hello = nullptr;
  VrfRegistry* vrf = nullptr;
  KesRegistry* kes = nullptr;
  EpochContext* epochs = nullptr;
  const Genesis* genesis = nullptr;
  Chain genesis_root;  // the simulation's shared root node
  const ChainParams* params = nullptr;
  const std::vector<int>* corrupted = nullptr;
  int64_t t_run = 0;
  bool vrf_gate_blocks_corrupted = true;
  Rng* rng = nullptr;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  // called synchronously whenever an honest multicast leaks
  virtual void on_leak(AdversaryView&, Diffusion&, int /*sender*/, int64_t /*now*/,
                       int64_t /*t_next*/, int64_t /*t_round*/, const NetMsg&,
                       const std::vector<Diffusion::LeakCopy>&) {}
  // called once per tick after all honest activations
  virtual void end_of_tick(AdversaryView&, int64_t /*now*/) {}
  virtual std::string name() const = 0;
};

class PassiveStrategy final : public Strategy {
 public:
  std::string name() const override { return "passive"; }
};

// Holds every copy as long as the delivery rules allow: on-time copies are
// pushed to the sender's deadline, lossy copies past the recovery horizon.
class MaxDelayStrategy final : public Strategy {
 public:
  explicit MaxDelayStrategy(int64_t extra = -1) : extra_(extra) {}

  void on_leak(AdversaryView&, Diffusion& net, int, int64_t now, int64_t, int64_t t_round,
               const NetMsg&, const std::vector<Diffusion::LeakCopy>& copies) override {
    for (const auto& c : copies) {
      const Diffusion::Entry* e = std::as_const(net).find(c.mid);
      if (!e) continue;
      if (c.rd == kRdOnTimeUnset) {
        net.set_delay(c.mid, e->D_max - now);
      } else if (c.rd == kRdLossyUnset) {
        int64_t extra = extra_ >= 0 ? extra_ : 2 * t_round;
        net.set_delay(c.mid, 2 * t_round + 1 + extra);
      }
    }
  }

  std::string name() const override { return "max-delay"; }

 private:
  int64_t extra_;
};

// Targeted per-copy delays, used to pin exact arrival ticks in walkthroughs.
class ScriptedDelayStrategy final : public Strategy {
 public:
  struct Rule {
    int sender = 0;
    int recipient = 0;
    int64_t arrive = 0;
  };

  explicit ScriptedDelayStrategy(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  void on_leak(AdversaryView&, Diffusion& net, int sender, int64_t now, int64_t, int64_t,
               const NetMsg&, const std::vector<Diffusion::LeakCopy>& copies) override {
    for (const auto& c : copies) {
      for (const Rule& r : rules_) {
        if (r.sender == sender && r.recipient == c.recipient && c.rd != kRdOnTimeSet &&
            c.rd != kRdDelayedSet) {
          net.set_delay(c.mid, r.arrive - now);
        }
      }
    }
  }

  std::string name() const override { return "scripted-delay"; }

 private:
  std::vector<Rule> rules_;
};

// One corrupted leader denies having seen the previous block and publishes a
// competing block on an older parent, late.
class DelayAttackStrategy final : public Strategy {
 public:
  struct Script {
    int attacker = 0;
    int64_t slot = 0;
    int64_t at_tick = 0;
  };

  explicit DelayAttackStrategy(Script s) : script_(s) {}

  void end_of_tick(AdversaryView& v, int64_t now) override {
    if (fired_ || now < script_.at_tick) return;
    fired_ = true;
    Chain parent = v.genesis_root;
    int64_t ep = std::max<int64_t>(epoch_of_slot(script_.slot, v.params->R), 1);
    Digest eta = v.epochs->eta(parent, ep);
    BlockNode b;
    b.h_prev = parent->id;
    b.sl = script_.slot;
    b.t_now = now;
    b.party = script_.attacker;
    auto test = *v.vrf->eval_prove(script_.attacker, vrf_input(eta, script_.slot, kVrfTest));
    auto nonce = *v.vrf->eval_prove(script_.attacker, vrf_input(eta, script_.slot, kVrfNonce));
    b.y = test.y;
    b.pi = test.pi;
    b.y_rho = nonce.y;
    b.pi_rho = nonce.pi;
    b.hflag = false;
    auto sig = v.kes->sign(script_.attacker, block_signing_digest(b), script_.slot);
    if (!sig) return;
    b.sig = *sig;
    Chain c = append_block(parent, std::move(b), v.params->R);
    for (int p : v.bc->parties())
      if (p != script_.attacker) v.bc->adversarial_multicast(script_.attacker, ChainMsg{c}, p,
                                                             kRdOnTimeSet, now, now, 0);
  }

  std::string name() const override { return "delay-attack"; }

 private:
  Script script_;
  bool fired_ = false;
};

// Corrupted stake extends a withheld fork and publishes it once it is both
// longer than the public chain and deep enough to force a rollback.
class PrivateForkStrategy final : public Strategy {
 public:
  PrivateForkStrategy(int64_t release_depth, int64_t max_withhold = -1)
      : release_depth_(release_depth), max_withhold_(max_withhold) {}

  void on_leak(AdversaryView&, Diffusion&, int, int64_t, int64_t, int64_t, const NetMsg& m,
               const std::vector<Diffusion::LeakCopy>&) override {
    if (const auto* cm = std::get_if<ChainMsg>(&m)) {
      if (!public_best_ || cm->chain->height > public_best_->height) public_best_ = cm->chain;
    }
  }

  void end_of_tick(AdversaryView& v, int64_t now) override {
    if (!public_best_) public_best_ = v.genesis_root;
    if (!private_tip_) private_tip_ = public_best_;

    SlotInfo si = current_slot_number(*v.epochs, public_best_, now);
    if (si.sl <= last_sl_ || si.sl < 1) return;
    last_sl_ = si.sl;

    // abandon a fork that fell behind
    if (private_tip_->height < public_best_->height) private_tip_ = public_best_;

    if (!v.vrf_gate_blocks_corrupted) {
      int64_t ep = std::max<int64_t>(si.ep, 1);
      const StakeDist& dist = v.epochs->stake_dist(private_tip_, ep);
      Digest eta = v.epochs->eta(private_tip_, ep);
      for (int c : *v.corrupted) {
        auto test = *v.vrf->eval_prove(c, vrf_input(eta, si.sl, kVrfTest));
        uint64_t T = leadership_threshold(v.params->f, dist.alpha(c), v.params->l_vrf);
        if (test.y >= T) continue;
        auto nonce = *v.vrf->eval_prove(c, vrf_input(eta, si.sl, kVrfNonce));
        BlockNode b;
        b.h_prev = private_tip_->id;
        b.sl = si.sl;
        b.t_now = now;
        b.party = c;
        b.y = test.y;
        b.pi = test.pi;
        b.y_rho = nonce.y;
        b.pi_rho = nonce.pi;
        b.hflag = false;
        auto sig = v.kes->sign(c, block_signing_digest(b), si.sl);
        if (!sig) continue;
        b.sig = *sig;
        private_tip_ = append_block(private_tip_, std::move(b), v.params->R);
        ++blocks_built;
        break;  // one adversarial extension per slot
      }
    }

    const BlockNode* lca = lowest_common_ancestor(private_tip_.get(), public_best_.get());
    int64_t depth = private_tip_->height - (lca ? lca->height : 0);
    bool deep = depth >= release_depth_;
    bool forced = max_withhold_ > 0 && depth >= max_withhold_;
    if (private_tip_->height > public_best_->height && depth > 0 && (deep || forced)) {
      for (int p : v.bc->parties())
        v.bc->adversarial_multicast(private_tip_->party, ChainMsg{private_tip_}, p, kRdOnTimeSet,
                                    now, now, 0);
      ++releases;
      public_best_ = private_tip_;
    }
  }

  std::string name() const override { return "private-fork"; }

  int64_t blocks_built = 0;
  int64_t releases = 0;

 private:
  int64_t release_depth_;
  int64_t max_withhold_;
  Chain public_best_;
  Chain private_tip_;
  int64_t last_sl_ = 0;
};

}  // namespace autosyn
