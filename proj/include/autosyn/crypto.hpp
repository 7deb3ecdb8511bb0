#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

#include "hash.hpp"
#include "rng.hpp"

namespace autosyn {

// VRF stand-in: a keyed deterministic hash truncated to l_vrf bits, with an
// ideal-registry verifier (the functionality knows every registered secret and
// verifies by recomputation). Nothing here is cryptographic; unforgeability is
// structural because evaluation is only reachable through this registry.
class VrfRegistry {
 public:
  struct Output {
    uint64_t y = 0;
    Digest pi;
  };

  VrfRegistry(uint64_t seed, int l_vrf) : rng_(Rng::derive(seed, "vrf-keygen")), l_vrf_(l_vrf) {}

  int l_vrf() const { return l_vrf_; }
  double two_pow_l() const { return std::ldexp(1.0, l_vrf_); }

  Digest keygen(int party) {
    auto it = keys_.find(party);
    if (it != keys_.end()) return it->second.vk;
    Key k;
    k.sk = rng_.next_u64();
    k.vk = Hasher(0x76726656)  // "vrfV"
               .u64(k.sk)
               .i64(party)
               .finish();
    keys_.emplace(party, k);
    by_vk_.emplace(k.vk, party);
    return k.vk;
  }

  std::optional<Digest> verification_key(int party) const {
    auto it = keys_.find(party);
    if (it == keys_.end()) return std::nullopt;
    return it->second.vk;
  }

  std::optional<Output> eval_prove(int party, const Digest& input) const {
    auto it = keys_.find(party);
    if (it == keys_.end()) return std::nullopt;
    return eval_with(it->second.sk, input);
  }

  bool verify(const Digest& vk, const Digest& input, uint64_t y, const Digest& pi) const {
    auto it = by_vk_.find(vk);
    if (it == by_vk_.end()) return false;
    Output o = eval_with(keys_.at(it->second).sk, input);
    return o.y == y && o.pi == pi;
  }

 private:
  struct Key {
    uint64_t sk = 0;
    Digest vk;
  };

  Output eval_with(uint64_t sk, const Digest& input) const {
    Digest base = Hasher(0x76726659).u64(sk).digest(input).finish();  // "vrfY"
    Output o;
    o.y = l_vrf_ >= 64 ? base.lo : (base.lo & ((uint64_t{1} << l_vrf_) - 1));
    o.pi = Hasher(0x76726650).u64(sk).digest(input).finish();  // "vrfP"
    return o;
  }

  Rng rng_;
  int l_vrf_;
  std::map<int, Key> keys_;
  std::map<Digest, int> by_vk_;
};

// Key-evolving signature stand-in. Forward security is modeled by a monotone
// current period: signing a slot below the period is refused. sign(slot) moves
// the period to that slot; evolve at slot sl (the protocol's "USign 0"
// message) moves it past sl. The max() guards keep repeated stalled-party
// evolutions from overshooting slots the party may still need to sign.
class KesRegistry {
 public:
  explicit KesRegistry(uint64_t seed) : rng_(Rng::derive(seed, "kes-keygen")) {}

  Digest keygen(int party) {
    auto it = keys_.find(party);
    if (it != keys_.end()) return it->second.vk;
    Key k;
    k.sk = rng_.next_u64();
    k.vk = Hasher(0x6b657356).u64(k.sk).i64(party).finish();  // "kesV"
    keys_.emplace(party, k);
    by_vk_.emplace(k.vk, party);
    return k.vk;
  }

  std::optional<Digest> verification_key(int party) const {
    auto it = keys_.find(party);
    if (it == keys_.end()) return std::nullopt;
    return it->second.vk;
  }

  // nullopt = forward-security refusal (slot already evolved past)
  std::optional<Digest> sign(int party, const Digest& msg, int64_t slot) {
    auto it = keys_.find(party);
    if (it == keys_.end()) return std::nullopt;
    Key& k = it->second;
    if (slot < k.period) return std::nullopt;
    k.period = std::max(k.period, slot);
    return sig_with(k.sk, msg, slot);
  }

  void evolve(int party, int64_t slot) {
    auto it = keys_.find(party);
    if (it == keys_.end()) return;
    it->second.period = std::max(it->second.period, slot + 1);
  }

  int64_t period(int party) const {
    auto it = keys_.find(party);
    return it == keys_.end() ? 0 : it->second.period;
  }

  bool verify(const Digest& vk, const Digest& msg, int64_t slot, const Digest& sig) const {
    auto it = by_vk_.find(vk);
    if (it == by_vk_.end()) return false;
    return sig_with(keys_.at(it->second).sk, msg, slot) == sig;
  }

 private:
  struct Key {
    uint64_t sk = 0;
    Digest vk;
    int64_t period = 0;
  };

  static Digest sig_with(uint64_t sk, const Digest& msg, int64_t slot) {
    return Hasher(0x6b657353).u64(sk).digest(msg).i64(slot).finish();  // "kesS"
  }

  Rng rng_;
  std::map<int, Key> keys_;
  std::map<Digest, int> by_vk_;
};

}  // namespace autosyn
