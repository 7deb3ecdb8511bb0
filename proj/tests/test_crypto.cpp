#include <gtest/gtest.h>

#include <autosyn/chain.hpp>
#include <autosyn/crypto.hpp>

using namespace autosyn;

TEST(Phi, KnownValues) {
  // phi_f(alpha) = 1 - (1-f)^alpha
  EXPECT_NEAR(phi(0.5, 0.5), 0.2928932188134524, 1e-15);
  EXPECT_DOUBLE_EQ(phi(0.1, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(phi(0.1, 1.0), 0.1);
  EXPECT_DOUBLE_EQ(phi(1.0, 1.0), 1.0);
  // independent aggregation: phi(a+b) = phi(a) + phi(b) - phi(a)phi(b)
  double a = 0.3, b = 0.45, f = 0.08;
  EXPECT_NEAR(phi(f, a + b), phi(f, a) + phi(f, b) - phi(f, a) * phi(f, b), 1e-15);
}

TEST(Phi, ThresholdFloors) {
  // floor(2^16 * phi_0.5(0.5)) = floor(65536 * 0.29289...) = 19195
  EXPECT_EQ(leadership_threshold(0.5, 0.5, 16), 19195u);
  EXPECT_EQ(leadership_threshold(1.0, 1.0, 8), 256u);
  EXPECT_EQ(leadership_threshold(0.5, 0.0, 16), 0u);
}

TEST(Vrf, KeygenIdempotent) {
  VrfRegistry vrf(11, 32);
  Digest vk1 = vrf.keygen(1);
  Digest vk1b = vrf.keygen(1);
  Digest vk2 = vrf.keygen(2);
  EXPECT_EQ(vk1, vk1b);
  EXPECT_NE(vk1, vk2);
  EXPECT_EQ(vrf.verification_key(1), vk1);
  EXPECT_EQ(vrf.verification_key(9), std::nullopt);
}

TEST(Vrf, EvalDeterministicAndVerifies) {
  VrfRegistry vrf(11, 32);
  Digest vk = vrf.keygen(1);
  Digest in = vrf_input(Digest{3, 4}, 17, kVrfTest);
  auto o1 = vrf.eval_prove(1, in);
  auto o2 = vrf.eval_prove(1, in);
  ASSERT_TRUE(o1 && o2);
  EXPECT_EQ(o1->y, o2->y);
  EXPECT_EQ(o1->pi, o2->pi);
  EXPECT_TRUE(vrf.verify(vk, in, o1->y, o1->pi));
  // tampered output, tampered proof, wrong input, wrong key all fail
  EXPECT_FALSE(vrf.verify(vk, in, o1->y ^ 1, o1->pi));
  EXPECT_FALSE(vrf.verify(vk, in, o1->y, Digest{1, 1}));
  EXPECT_FALSE(vrf.verify(vk, vrf_input(Digest{3, 4}, 18, kVrfTest), o1->y, o1->pi));
  Digest vk2 = vrf.keygen(2);
  EXPECT_FALSE(vrf.verify(vk2, in, o1->y, o1->pi));
  EXPECT_FALSE(vrf.verify(Digest{9, 9}, in, o1->y, o1->pi));  // unknown key
}

TEST(Vrf, UnknownPartyCannotEval) {
  VrfRegistry vrf(11, 32);
  EXPECT_EQ(vrf.eval_prove(5, Digest{1, 2}), std::nullopt);
}

TEST(Vrf, TestAndNonceInputsDiffer) {
  Digest eta{42, 43};
  EXPECT_NE(vrf_input(eta, 3, kVrfTest), vrf_input(eta, 3, kVrfNonce));
  EXPECT_NE(vrf_input(eta, 3, kVrfTest), vrf_input(eta, 4, kVrfTest));
  EXPECT_NE(vrf_input(eta, 3, kVrfTest), vrf_input(Digest{42, 44}, 3, kVrfTest));
}

TEST(Vrf, OutputMaskedToLVrfBits) {
  VrfRegistry vrf(5, 8);
  vrf.keygen(1);
  EXPECT_EQ(vrf.two_pow_l(), 256.0);
  for (int sl = 0; sl < 200; ++sl) {
    auto o = vrf.eval_prove(1, vrf_input(Digest{}, sl, kVrfTest));
    ASSERT_LT(o->y, 256u);
  }
}

TEST(Vrf, OutputRoughlyUniform) {
  VrfRegistry vrf(7, 32);
  vrf.keygen(1);
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    auto o = vrf.eval_prove(1, vrf_input(Digest{0, static_cast<uint64_t>(i)}, 1, kVrfTest));
    sum += static_cast<double>(o->y) / 4294967296.0;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Kes, SignAndVerify) {
  KesRegistry kes(13);
  Digest vk = kes.keygen(1);
  Digest msg{10, 20};
  auto sig = kes.sign(1, msg, 5);
  ASSERT_TRUE(sig);
  EXPECT_TRUE(kes.verify(vk, msg, 5, *sig));
  EXPECT_FALSE(kes.verify(vk, Digest{10, 21}, 5, *sig));
  EXPECT_FALSE(kes.verify(vk, msg, 6, *sig));
  Digest vk2 = kes.keygen(2);
  EXPECT_FALSE(kes.verify(vk2, msg, 5, *sig));
  EXPECT_FALSE(kes.verify(Digest{1, 2}, msg, 5, *sig));
}

TEST(Kes, ForwardSecurity) {
  KesRegistry kes(13);
  kes.keygen(1);
  EXPECT_EQ(kes.period(1), 0);
  ASSERT_TRUE(kes.sign(1, Digest{1, 0}, 5));
  EXPECT_EQ(kes.period(1), 5);  // signing moves the period up to the slot
  ASSERT_TRUE(kes.sign(1, Digest{2, 0}, 5));  // same slot still allowed
  EXPECT_EQ(kes.sign(1, Digest{3, 0}, 4), std::nullopt);  // older slot refused
  kes.evolve(1, 5);
  EXPECT_EQ(kes.period(1), 6);
  EXPECT_EQ(kes.sign(1, Digest{4, 0}, 5), std::nullopt);  // evolved past 5
  ASSERT_TRUE(kes.sign(1, Digest{5, 0}, 6));
  // evolve never moves the period backwards
  kes.evolve(1, 2);
  EXPECT_EQ(kes.period(1), 6);
}

TEST(Kes, UnknownPartyRefused) {
  KesRegistry kes(13);
  EXPECT_EQ(kes.sign(9, Digest{}, 1), std::nullopt);
  kes.evolve(9, 1);  // no-op, must not crash
  EXPECT_EQ(kes.period(9), 0);
}

TEST(Kes, KeygenIdempotent) {
  KesRegistry kes(13);
  EXPECT_EQ(kes.keygen(1), kes.keygen(1));
  EXPECT_NE(kes.keygen(1), kes.keygen(2));
}
