#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chain.hpp"
#include "rng.hpp"

namespace autosyn {

// message kinds carried by the four diffusion instances (bc / tx / adj / new)
struct ChainMsg {
  Chain chain;
};
struct TxMsg {
  std::vector<Tx> txs;
};
struct AdjMsg {
  std::vector<AdjustRecord> records;
};
struct HelloMsg {
  int party = -1;
};
using NetMsg = std::variant<ChainMsg, TxMsg, AdjMsg, HelloMsg>;

// per-copy delivery state:
//   0 on-time, delay unset   (drawn with prob eta)
//   1 lossy,  delay unset    (drawn with prob 1-eta)
//   2 on-time, delay set     (fetchable once D <= now)
//   3 delayed, delay set     (fetchable once D <= now, D unbounded)
enum : int { kRdOnTimeUnset = 0, kRdLossyUnset = 1, kRdOnTimeSet = 2, kRdDelayedSet = 3 };

// One diffusion functionality instance. Delivery bookkeeping: D is the tick a
// copy becomes fetchable and is what fetch reports as the receive time.
class Diffusion {
 public:
  struct Entry {
    NetMsg m;
    uint64_t mid = 0;
    int sender = -1;
    int recipient = -1;
    int64_t D = 0;      // fetchable-from tick once rd is set
    int64_t D_max = 0;  // sender's t_next at send time (on-time deadline)
    int64_t t_round_sender = 0;
    int rd = kRdOnTimeUnset;
    uint64_t seq = 0;
  };

  struct LeakCopy {
    uint64_t mid = 0;
    int recipient = -1;
    int rd = kRdOnTimeUnset;
  };

  struct Fetched {
    NetMsg m;
    uint64_t mid = 0;
    int sender = -1;
    int64_t d_mid = 0;
    int rd = 0;
    uint64_t seq = 0;
  };

  struct PromoEvent {
    uint64_t mid = 0;
    int recipient = -1;
    int rd_from = 0;
    int rd_to = 0;
    int64_t D = 0;
  };

  Diffusion(std::string name, uint64_t seed, double eta)
      : name_(std::move(name)), eta_(eta), rng_(Rng::derive(seed, "net:" + name_)) {}

  const std::string& name() const { return name_; }
  double eta() const { return eta_; }

  void register_party(int id) { parties_.insert(id); }
  void deregister_party(int id) { parties_.erase(id); }
  bool registered(int id) const { return parties_.count(id) > 0; }
  const std::set<int>& parties() const { return parties_; }

  // scripted initial draw (figure scenarios); return nullopt for a random draw
  std::function<std::optional<int>(int sender, int recipient)> forced_rd;

  // One copy per registered party (sender included). Copies leak to the
  // adversary immediately.
  std::vector<LeakCopy> honest_multicast(int sender, NetMsg m, int64_t now, int64_t t_next,
                                         int64_t t_round) {
    std::vector<LeakCopy> leaks;
    for (int r : parties_) {
      Entry e;
      e.m = m;
      e.mid = ++next_mid_;
      e.sender = sender;
      e.recipient = r;
      e.D = now;
      e.D_max = t_next;
      e.t_round_sender = t_round;
      e.seq = ++next_seq_;
      std::optional<int> forced = forced_rd ? forced_rd(sender, r) : std::nullopt;
      if (forced) {
        e.rd = *forced;
      } else {
        bool on_time = rng_.bernoulli(eta_);
        e.rd = on_time ? kRdOnTimeUnset : kRdLossyUnset;
        ++(on_time ? draws_on_time_ : draws_lossy_);
      }
      leaks.push_back({e.mid, r, e.rd});
      index_[e.mid] = r;
      queues_[r].push_back(std::move(e));
      ++enqueued_;
    }
    return leaks;
  }

  // Corrupted senders choose recipients, rd and fetchable-from tick per copy.
  // rd=2 with D=now models "always on time" delivery.
  uint64_t adversarial_multicast(int sender, NetMsg m, int recipient, int rd, int64_t D,
                                 int64_t now, int64_t t_round) {
    if (!registered(recipient)) return 0;
    Entry e;
    e.m = std::move(m);
    e.mid = ++next_mid_;
    e.sender = sender;
    e.recipient = recipient;
    e.D = std::max(D, now);
    e.D_max = e.D;
    e.t_round_sender = t_round;
    e.rd = rd;
    e.seq = ++next_seq_;
    index_[e.mid] = recipient;
    queues_[recipient].push_back(std::move(e));
    ++enqueued_;
    return next_mid_;
  }

  // rd=1: D += T, rd := 3 (unbounded). rd=0: applied only when D+T stays
  // within the on-time deadline, then rd := 2; otherwise ignored.
  bool set_delay(uint64_t mid, int64_t T) {
    Entry* e = find(mid);
    if (!e) return false;
    if (e->rd == kRdLossyUnset) {
      e->D += T;
      e->rd = kRdDelayedSet;
      return true;
    }
    if (e->rd == kRdOnTimeUnset) {
      if (e->D + T > e->D_max) return false;
      e->D += T;
      e->rd = kRdOnTimeSet;
      return true;
    }
    return false;
  }

  // swap the delivery states of two undetermined copies
  bool mix(uint64_t mid1, uint64_t mid2) {
    Entry* a = find(mid1);
    Entry* b = find(mid2);
    if (!a || !b || a == b) return false;
    bool a_ok = a->rd == kRdOnTimeUnset || a->rd == kRdLossyUnset;
    bool b_ok = b->rd == kRdOnTimeUnset || b->rd == kRdLossyUnset;
    if (!a_ok || !b_ok) return false;
    std::swap(a->rd, b->rd);
    return true;
  }

  // swap queue positions (same recipient only; order is recipient-local)
  bool swap_order(uint64_t mid1, uint64_t mid2) {
    Entry* a = find(mid1);
    Entry* b = find(mid2);
    if (!a || !b || a == b || a->recipient != b->recipient) return false;
    std::swap(a->seq, b->seq);
    return true;
  }

  // remove and return all fetchable copies for a party, in queue order
  std::vector<Fetched> fetch(int party, int64_t now) {
    std::vector<Fetched> out;
    auto it = queues_.find(party);
    if (it == queues_.end()) return out;
    auto& q = it->second;
    std::vector<Entry> keep;
    keep.reserve(q.size());
    for (auto& e : q) {
      if ((e.rd == kRdOnTimeSet || e.rd == kRdDelayedSet) && e.D <= now)
        out.push_back({std::move(e.m), e.mid, e.sender, e.D, e.rd, e.seq});
      else
        keep.push_back(std::move(e));
    }
    q = std::move(keep);
    for (const auto& f : out) index_.erase(f.mid);
    fetched_ += static_cast<int64_t>(out.size());
    std::sort(out.begin(), out.end(),
              [](const Fetched& x, const Fetched& y) { return x.seq < y.seq; });
    return out;
  }

  // start-of-tick pass: on-time copies the adversary left alone become
  // fetchable at their deadline, delivered exactly then
  void promote_deadlines(int64_t now) {
    for (auto& [r, q] : queues_)
      for (auto& e : q)
        if (e.rd == kRdOnTimeUnset && e.D_max <= now) {
          e.rd = kRdOnTimeSet;
          e.D = e.D_max;
          promotions_.push_back({e.mid, e.recipient, kRdOnTimeUnset, kRdOnTimeSet, e.D});
        }
  }

  // end-of-tick pass: lossy copies the adversary did not touch get the default
  // late delivery two sender-rounds out
  void promote_unattended() {
    for (auto& [r, q] : queues_)
      for (auto& e : q)
        if (e.rd == kRdLossyUnset) {
          e.D += 2 * e.t_round_sender + 1;
          e.rd = kRdDelayedSet;
          promotions_.push_back({e.mid, e.recipient, kRdLossyUnset, kRdDelayedSet, e.D});
        }
  }

  std::vector<PromoEvent> drain_promotions() { return std::exchange(promotions_, {}); }

  // adversary inspection
  const Entry* find(uint64_t mid) const { return const_cast<Diffusion*>(this)->find(mid); }
  size_t in_flight() const {
    size_t n = 0;
    for (const auto& [r, q] : queues_) n += q.size();
    return n;
  }

  int64_t enqueued() const { return enqueued_; }
  int64_t fetched() const { return fetched_; }
  int64_t draws_on_time() const { return draws_on_time_; }
  int64_t draws_lossy() const { return draws_lossy_; }

 private:
  Entry* find(uint64_t mid) {
    auto it = index_.find(mid);
    if (it == index_.end()) return nullptr;
    for (auto& e : queues_[it->second])
      if (e.mid == mid) return &e;
    return nullptr;
  }

  std::string name_;
  double eta_;
  Rng rng_;
  std::set<int> parties_;
  std::map<int, std::vector<Entry>> queues_;
  std::map<uint64_t, int> index_;
  std::vector<PromoEvent> promotions_;
  uint64_t next_mid_ = 0;
  uint64_t next_seq_ = 0;
  int64_t enqueued_ = 0;
  int64_t fetched_ = 0;
  int64_t draws_on_time_ = 0;
  int64_t draws_lossy_ = 0;
};

}  // namespace autosyn
