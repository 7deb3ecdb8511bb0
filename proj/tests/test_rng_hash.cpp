#include <gtest/gtest.h>

#include <autosyn/hash.hpp>
#include <autosyn/rng.hpp>

#include <array>
#include <set>

using namespace autosyn;

TEST(Rng, SameSeedSameSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiverge) {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  EXPECT_LT(same, 2);
}

TEST(Rng, DeriveSeedSeparatesTags) {
  uint64_t s1 = Rng::derive_seed(7, "network");
  uint64_t s2 = Rng::derive_seed(7, "adversary");
  uint64_t s3 = Rng::derive_seed(8, "network");
  EXPECT_NE(s1, s2);
  EXPECT_NE(s1, s3);
  EXPECT_EQ(s1, Rng::derive_seed(7, "network"));
}

TEST(Rng, UniformInRangeAndCentered) {
  Rng r(9001);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // mean of n uniforms: sd = 1/sqrt(12 n) ~ 0.0009; allow 5 sd
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(Rng, BelowIsBoundedAndBalanced) {
  Rng r(33);
  std::array<int, 10> buckets{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    uint64_t x = r.below(10);
    ASSERT_LT(x, 10u);
    buckets[x]++;
  }
  for (int b : buckets) EXPECT_NEAR(b, n / 10, 500);
  EXPECT_EQ(r.below(0), 0u);
  EXPECT_EQ(r.below(1), 0u);
}

TEST(Rng, BernoulliMatchesProbability) {
  Rng r(77);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3);
  // sd = sqrt(n p (1-p)) ~ 145; allow 5 sd
  EXPECT_NEAR(hits, 30000, 750);
  Rng r2(78);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(r2.bernoulli(0.0));
    EXPECT_TRUE(r2.bernoulli(1.0));
  }
}

TEST(Digest, HexFormatsFixedWidth) {
  Digest d{0x0123456789abcdefull, 0xfedcba9876543210ull};
  EXPECT_EQ(d.hex(), "0123456789abcdeffedcba9876543210");
  Digest z{};
  EXPECT_EQ(z.hex(), std::string(32, '0'));
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(d.is_zero());
}

TEST(Digest, OrderingAndEquality) {
  Digest a{1, 2}, b{1, 3}, c{2, 0};
  EXPECT_EQ(a, (Digest{1, 2}));
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
}

TEST(Hasher, DeterministicAndInputSensitive) {
  Digest d1 = Hasher(1).u64(10).u64(20).finish();
  Digest d2 = Hasher(1).u64(10).u64(20).finish();
  Digest d3 = Hasher(1).u64(10).u64(21).finish();
  Digest d4 = Hasher(2).u64(10).u64(20).finish();
  EXPECT_EQ(d1, d2);
  EXPECT_NE(d1, d3);
  EXPECT_NE(d1, d4);
}

TEST(Hasher, OrderSensitive) {
  EXPECT_NE(Hasher().u64(1).u64(2).finish(), Hasher().u64(2).u64(1).finish());
}

TEST(Hasher, StrLengthPrefixAvoidsExtensionConfusion) {
  // "ab" then "c" must differ from "a" then "bc": str absorbs its length
  Digest d1 = Hasher().str("ab").str("c").finish();
  Digest d2 = Hasher().str("a").str("bc").finish();
  EXPECT_NE(d1, d2);
  // empty string still perturbs the state relative to nothing
  EXPECT_NE(Hasher().str("").finish(), Hasher().finish());
  // trailing NUL is part of the input, not a terminator
  EXPECT_NE(Hasher().str(std::string_view("a\0", 2)).finish(),
            Hasher().str("a").finish());
}

TEST(Hasher, StrChunksAcrossWordBoundary) {
  // 9 bytes forces a full word plus a 1-byte tail
  Digest d1 = Hasher().str("abcdefghi").finish();
  Digest d2 = Hasher().str("abcdefghj").finish();
  Digest d3 = Hasher().str("abcdefgh").finish();
  EXPECT_NE(d1, d2);
  EXPECT_NE(d1, d3);
}

TEST(Hasher, NoSmallScaleCollisions) {
  std::set<std::string> seen;
  for (uint64_t i = 0; i < 2000; ++i) seen.insert(Hasher(7).u64(i).finish().hex());
  EXPECT_EQ(seen.size(), 2000u);
}

TEST(Hasher, DigestAbsorbEqualsTwoWords) {
  Digest d{11, 22};
  EXPECT_EQ(Hasher().digest(d).finish(), Hasher().u64(11).u64(22).finish());
  EXPECT_EQ(Hasher().i64(-5).finish(), Hasher().u64(static_cast<uint64_t>(-5)).finish());
}
