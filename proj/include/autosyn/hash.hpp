#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

namespace autosyn {

// 128-bit digest used everywhere a random-oracle hash is assumed: block ids,
// epoch nonces, VRF stand-in outputs, signatures. Not cryptographic; the model
// only needs determinism, collision-freeness at simulation scale and good
// avalanche (the VRF uniformity tests depend on the latter).
struct Digest {
  uint64_t hi = 0;
  uint64_t lo = 0;

  friend bool operator==(const Digest&, const Digest&) = default;
  friend auto operator<=>(const Digest&, const Digest&) = default;

  bool is_zero() const { return hi == 0 && lo == 0; }

  std::string hex() const {
    static const char* d = "0123456789abcdef";
    std::string s(32, '0');
    uint64_t parts[2] = {hi, lo};
    for (int p = 0; p < 2; ++p)
      for (int i = 0; i < 16; ++i)
        s[p * 16 + i] = d[(parts[p] >> (60 - 4 * i)) & 0xf];
    return s;
  }
};

struct DigestHash {
  size_t operator()(const Digest& d) const noexcept {
    return static_cast<size_t>(d.hi ^ (d.lo * 0x9e3779b97f4a7c15ull));
  }
};

namespace detail {
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
inline uint64_t rotl(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }
}  // namespace detail

// Streaming hasher: two 64-bit lanes absorbing little-endian words, splitmix
// finalization. Word-wise absorption keeps it fast for block serialization.
class Hasher {
 public:
  Hasher() = default;
  explicit Hasher(uint64_t domain) { absorb_word(domain); }

  Hasher& u64(uint64_t w) {
    absorb_word(w);
    return *this;
  }
  Hasher& i64(int64_t w) { return u64(static_cast<uint64_t>(w)); }
  Hasher& digest(const Digest& d) { return u64(d.hi).u64(d.lo); }
  Hasher& str(std::string_view s) {
    u64(s.size());
    uint64_t w = 0;
    size_t i = 0;
    for (unsigned char c : s) {
      w |= static_cast<uint64_t>(c) << (8 * (i & 7));
      if ((i & 7) == 7) {
        absorb_word(w);
        w = 0;
      }
      ++i;
    }
    if (i & 7) absorb_word(w);
    return *this;
  }

  Digest finish() const {
    uint64_t a = detail::mix64(a_ ^ detail::rotl(b_, 29) ^ (len_ * 0xff51afd7ed558ccdull));
    uint64_t b = detail::mix64(b_ + detail::rotl(a_, 17) + len_);
    return Digest{a, detail::mix64(a ^ b)};
  }

 private:
  void absorb_word(uint64_t w) {
    a_ = detail::mix64(a_ ^ w);
    b_ = detail::mix64(b_ + detail::rotl(w, 32) + 0x2545f4914f6cdd1dull);
    ++len_;
  }

  uint64_t a_ = 0x6a09e667f3bcc908ull;
  uint64_t b_ = 0xbb67ae8584caa73bull;
  uint64_t len_ = 0;
};

}  // namespace autosyn
