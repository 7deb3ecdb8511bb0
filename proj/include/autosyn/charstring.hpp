#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace autosyn {

// per-slot execution label: 0 unique alert leader, 1 adversarial or multiple
// leaders, ⊥ no leader
enum class Sym : uint8_t { Zero = 0, One = 1, Bot = 2 };
using CharString = std::vector<Sym>;

inline CharString parse_charstring(std::string_view s) {
  CharString w;
  w.reserve(s.size());
  for (char c : s) {
    if (c == '0')
      w.push_back(Sym::Zero);
    else if (c == '1')
      w.push_back(Sym::One);
    else if (c == '_' || c == 'b')
      w.push_back(Sym::Bot);
    else
      throw std::invalid_argument("charstring: unexpected symbol");
  }
  return w;
}

inline std::string format_charstring(const CharString& w) {
  std::string s;
  s.reserve(w.size());
  for (Sym x : w) s.push_back(x == Sym::Zero ? '0' : x == Sym::One ? '1' : '_');
  return s;
}

inline int64_t count_sym(const CharString& w, Sym x) {
  return std::count(w.begin(), w.end(), x);
}

// delay reduction: a uniquely-led slot keeps its 0 only when the block
// actually reached everyone (delivered), otherwise it degrades to ⊥
inline CharString real_reduction(const CharString& w, const std::vector<uint8_t>& delivered) {
  CharString out(w.size(), Sym::Bot);
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] == Sym::One)
      out[i] = Sym::One;
    else if (w[i] == Sym::Zero && i < delivered.size() && delivered[i])
      out[i] = Sym::Zero;
  }
  return out;
}

// ⊥-erasure: the binary string the fork arguments run on
inline CharString bot_reduction(const CharString& w) {
  CharString out;
  out.reserve(w.size());
  for (Sym x : w)
    if (x != Sym::Bot) out.push_back(x);
  return out;
}

// ----------------------------------------------------------------- divergence
//
// div(w): the deepest disagreement, in blocks, two end-viable chains over w
// can exhibit (max over forks and tine pairs of min(len1,len2) minus the
// shared prefix length). The fork-state enumeration below is the normative
// definition in this codebase; the margin recurrence is the fast path and is
// checked against it exhaustively in the tests.

namespace detail {

// pre-split state: designated trunk length c, deepest honest depth h.
// post-split: branch lengths l1,l2, honest depth h, split depth c0.
struct ForkKey {
  int16_t a = 0, b = 0, c = 0, d = 0;
  bool operator==(const ForkKey& o) const = default;
};
struct ForkKeyHash {
  size_t operator()(const ForkKey& k) const {
    uint64_t v = (uint64_t(uint16_t(k.a)) << 48) | (uint64_t(uint16_t(k.b)) << 32) |
                 (uint64_t(uint16_t(k.c)) << 16) | uint64_t(uint16_t(k.d));
    v ^= v >> 33;
    v *= 0xff51afd7ed558ccdULL;
    v ^= v >> 33;
    return static_cast<size_t>(v);
  }
};
using ForkSet = std::unordered_set<ForkKey, ForkKeyHash>;

}  // namespace detail

inline int64_t divergence_bruteforce(const CharString& w) {
  using detail::ForkKey;
  using detail::ForkSet;
  ForkSet trunk{{0, 0, 0, 0}};  // (c, h, -, -)
  ForkSet split;                // (l1, l2, h, c0)
  auto add_split_points = [&] {
    for (const auto& s : trunk) {
      int16_t start = std::max(s.a, s.b);
      split.insert({start, start, s.b, start});
    }
  };
  for (Sym sym : w) {
    if (sym == Sym::Bot) continue;  // no vertex in this slot
    add_split_points();
    ForkSet t2, s2;
    for (const auto& s : trunk) {
      int16_t c = s.a, h = s.b;
      if (sym == Sym::Zero) {
        if (c >= h) t2.insert({int16_t(c + 1), int16_t(c + 1), 0, 0});  // extend trunk
        t2.insert({c, int16_t(h + 1), 0, 0});                           // deepen off-trunk
        t2.insert({int16_t(h + 1), int16_t(h + 1), 0, 0});  // extend + adopt honest spine
      } else {
        t2.insert({int16_t(std::max(c, h) + 1), h, 0, 0});  // extend best tine
        t2.insert({c, h, 0, 0});
      }
    }
    for (const auto& s : split) {
      int16_t l1 = s.a, l2 = s.b, h = s.c, c0 = s.d;
      if (sym == Sym::Zero) {
        if (l1 >= h) s2.insert({int16_t(l1 + 1), l2, int16_t(l1 + 1), c0});
        if (l2 >= h) s2.insert({l1, int16_t(l2 + 1), int16_t(l2 + 1), c0});
        s2.insert({l1, l2, int16_t(h + 1), c0});
      } else {  // an adversarial slot may add one vertex to each branch
        s2.insert({int16_t(l1 + 1), l2, h, c0});
        s2.insert({l1, int16_t(l2 + 1), h, c0});
        s2.insert({int16_t(l1 + 1), int16_t(l2 + 1), h, c0});
        s2.insert({l1, l2, h, c0});
      }
    }
    trunk = std::move(t2);
    split = std::move(s2);
  }
  add_split_points();
  int64_t best = 0;
  for (const auto& s : split)
    if (s.a >= s.c && s.b >= s.c) best = std::max<int64_t>(best, std::min(s.a, s.b) - s.d);
  return best;
}

// margin-game form of the same quantity. After the fork point the state of an
// optimal play collapses to (m, g, v): m = shorter branch height minus the
// honest watermark, g = height gap between the branches, v = blocks already
// banked on the shorter branch. Adversarial slots lift both branches; honest
// slots either deepen the watermark elsewhere (m-1), open a gap on equal
// branches, convert one unit of gap into a banked block, or extend the longer
// branch. A play is admissible when it ends with m >= 0. The pre-fork prefix
// matters only through its reach, so a single left-to-right pass seeding
// (reach, 0, 0) at every position covers all fork points.
inline int64_t divergence_recurrence(const CharString& w) {
  CharString b = bot_reduction(w);
  const int64_t n = static_cast<int64_t>(b.size());
  std::vector<int64_t> ones_left(n + 1, 0), zeros_left(n + 1, 0);
  for (int64_t i = n - 1; i >= 0; --i) {
    ones_left[i] = ones_left[i + 1] + (b[i] == Sym::One ? 1 : 0);
    zeros_left[i] = zeros_left[i + 1] + (b[i] == Sym::Zero ? 1 : 0);
  }
  // per-gap antichain: m ascending, v descending (higher m with higher v
  // dominates; transitions and the final harvest are monotone in both)
  using Chain = std::vector<std::pair<int64_t, int64_t>>;
  std::unordered_map<int64_t, Chain> front;
  int64_t best = 0;
  auto push = [&](std::unordered_map<int64_t, Chain>& f, int64_t m, int64_t g, int64_t v,
                  int64_t i) {
    if (m + ones_left[i] < 0) return;  // viability is out of reach
    // future gains: one per adversarial slot, and gap conversions where
    // growing extra gap costs an honest slot of its own
    int64_t conv = std::min(zeros_left[i], (std::max<int64_t>(g, 0) + zeros_left[i]) / 2);
    if (v + ones_left[i] + conv <= best) return;
    if (m + ones_left[i] - zeros_left[i] >= 0)  // coasting already banks this much
      best = std::max(best, v + ones_left[i]);
    Chain& c = f[g];
    auto ge = std::lower_bound(c.begin(), c.end(), m,
                               [](const auto& p, int64_t key) { return p.first < key; });
    if (ge != c.end() && ge->second >= v) return;  // some m' >= m banks at least v
    auto run_end = (ge != c.end() && ge->first == m) ? ge + 1 : ge;
    auto first = std::partition_point(c.begin(), run_end,
                                      [&](const auto& p) { return p.second > v; });
    c.insert(c.erase(first, run_end), {m, v});
  };
  int64_t reach = 0;
  for (int64_t i = 0;; ++i) {
    push(front, reach, 0, 0, i);
    if (i == n) break;
    Sym s = b[i];
    std::unordered_map<int64_t, Chain> next;
    next.reserve(front.size() + 2);
    for (const auto& [g, chain] : front) {
      for (const auto& [m, v] : chain) {
        if (s == Sym::One) {
          push(next, m + 1, g, v + 1, i + 1);
        } else {
          push(next, m - 1, g, v, i + 1);
          // gap beyond the zeros still available to convert it is dead weight;
          // the deepen-elsewhere move dominates such mints
          bool mintable = g < zeros_left[i + 1];
          if (g == 0 && m >= 0 && mintable) push(next, -1, 1, v, i + 1);
          if (g >= 1 && m >= 0) push(next, 0, g - 1, v + 1, i + 1);
          if (m + g >= 0 && mintable) push(next, -g - 1, g + 1, v, i + 1);
        }
      }
    }
    front = std::move(next);
    reach = s == Sym::One ? reach + 1 : std::max<int64_t>(reach - 1, 0);
  }
  for (const auto& [g, chain] : front)
    for (const auto& [m, v] : chain)
      if (m >= 0) best = std::max(best, v);
  return best;
}

inline constexpr int64_t kDivergenceBruteMax = 40;

inline int64_t divergence(const CharString& w) {
  CharString b = bot_reduction(w);
  if (static_cast<int64_t>(b.size()) <= kDivergenceBruteMax) return divergence_bruteforce(b);
  return divergence_recurrence(b);
}

// ------------------------------------------------------------ frequency audit

// empirical symbol rates of the delay-reduced string against the single-epoch
// lower bound alpha*(1-f)^2*eta with a binomial 3-sigma margin
struct RateAudit {
  int64_t slots = 0;
  double freq_zero = 0;
  double freq_one = 0;
  double freq_bot = 0;
  double bound_zero = 0;  // alpha*(1-f)^2*eta
  double margin = 0;      // 3*sqrt(b(1-b)/n)
  bool zero_ok = true;
};

inline RateAudit rate_audit(const CharString& reduced, double alpha, double f, double eta) {
  RateAudit a;
  a.slots = static_cast<int64_t>(reduced.size());
  if (a.slots == 0) return a;
  a.freq_zero = static_cast<double>(count_sym(reduced, Sym::Zero)) / a.slots;
  a.freq_one = static_cast<double>(count_sym(reduced, Sym::One)) / a.slots;
  a.freq_bot = static_cast<double>(count_sym(reduced, Sym::Bot)) / a.slots;
  a.bound_zero = alpha * (1.0 - f) * (1.0 - f) * eta;
  a.margin = 3.0 * std::sqrt(std::max(a.bound_zero * (1.0 - a.bound_zero), 1e-12) / a.slots);
  a.zero_ok = a.freq_zero >= a.bound_zero - a.margin;
  return a;
}

}  // namespace autosyn
