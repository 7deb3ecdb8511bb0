#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace autosyn {

// Portable deterministic RNG. mt19937_64's raw output sequence is fixed by the
// standard; the derived draws below avoid std::*_distribution, whose sequences
// are implementation-defined and would break cross-platform replay.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // uniform in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform in [0,n) via rejection sampling (unbiased, deterministic)
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // independent substream: master seed mixed with a tag
  static uint64_t derive_seed(uint64_t master, std::string_view tag) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : tag) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= master;
    // splitmix64 finalizer for avalanche
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
  }

  static Rng derive(uint64_t master, std::string_view tag) {
    return Rng(derive_seed(master, tag));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace autosyn
