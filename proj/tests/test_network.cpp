#include <gtest/gtest.h>

#include <autosyn/network.hpp>

using namespace autosyn;

namespace {

HelloMsg hello(int p) { return HelloMsg{p}; }

// multicast with every draw forced to the given rd
std::vector<Diffusion::LeakCopy> cast_forced(Diffusion& net, int sender, int rd, int64_t now,
                                             int64_t t_next, int64_t t_round) {
  net.forced_rd = [rd](int, int) { return rd; };
  auto leaks = net.honest_multicast(sender, hello(sender), now, t_next, t_round);
  net.forced_rd = nullptr;
  return leaks;
}

const Diffusion::Entry* peek(const Diffusion& net, uint64_t mid) { return net.find(mid); }

}  // namespace

TEST(Diffusion, MulticastCopiesToEveryRegisteredPartyIncludingSender) {
  Diffusion net("bc", 1, 1.0);
  for (int p : {1, 2, 3}) net.register_party(p);
  auto leaks = net.honest_multicast(1, hello(1), 5, 10, 10);
  EXPECT_EQ(leaks.size(), 3u);
  EXPECT_EQ(net.in_flight(), 3u);
  EXPECT_EQ(net.enqueued(), 3);
  std::set<int> recipients;
  for (const auto& l : leaks) recipients.insert(l.recipient);
  EXPECT_EQ(recipients, (std::set<int>{1, 2, 3}));
}

TEST(Diffusion, NoRecipientsNoCopies) {
  Diffusion net("bc", 1, 1.0);
  auto leaks = net.honest_multicast(1, hello(1), 5, 10, 10);
  EXPECT_TRUE(leaks.empty());
  EXPECT_EQ(net.in_flight(), 0u);
}

TEST(Diffusion, EtaOneAlwaysOnTime) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(1);
  net.register_party(2);
  for (int i = 0; i < 50; ++i)
    for (const auto& l : net.honest_multicast(1, hello(1), i, i + 10, 10))
      EXPECT_EQ(l.rd, kRdOnTimeUnset);
  EXPECT_EQ(net.draws_on_time(), 100);
  EXPECT_EQ(net.draws_lossy(), 0);
}

TEST(Diffusion, LossRateMatchesEta) {
  // acceptance-shaped check at module scale: eta=2/3, ~30000 copies, +-0.01
  Diffusion net("bc", 99, 2.0 / 3.0);
  for (int p = 1; p <= 10; ++p) net.register_party(p);
  for (int i = 0; i < 3000; ++i) net.honest_multicast(1 + (i % 10), hello(1), i, i + 10, 10);
  int64_t total = net.draws_on_time() + net.draws_lossy();
  EXPECT_EQ(total, 30000);
  EXPECT_NEAR(static_cast<double>(net.draws_on_time()) / total, 2.0 / 3.0, 0.01);
}

TEST(Diffusion, ForcedDrawSkipsCountersAndRng) {
  Diffusion net("bc", 7, 0.5);
  net.register_party(1);
  cast_forced(net, 1, kRdLossyUnset, 0, 10, 10);
  EXPECT_EQ(net.draws_on_time() + net.draws_lossy(), 0);
}

TEST(Diffusion, SetDelayOnTimeRespectsDeadline) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  auto leaks = cast_forced(net, 1, kRdOnTimeUnset, 10, 20, 10);
  uint64_t mid = leaks[0].mid;
  // 10+5 <= 20: applied, copy becomes rd=2 fetchable at 15
  EXPECT_TRUE(net.set_delay(mid, 5));
  const auto* e = peek(net, mid);
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->rd, kRdOnTimeSet);
  EXPECT_EQ(e->D, 15);
  // already set: refused
  EXPECT_FALSE(net.set_delay(mid, 1));
}

TEST(Diffusion, SetDelayPastDeadlineRefusedThenDeadlinePromotes) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  auto leaks = cast_forced(net, 1, kRdOnTimeUnset, 10, 20, 10);
  uint64_t mid = leaks[0].mid;
  EXPECT_FALSE(net.set_delay(mid, 11));  // 10+11 > D_max=20
  EXPECT_EQ(peek(net, mid)->rd, kRdOnTimeUnset);
  // before the deadline nothing is fetchable, at the deadline D := D_max
  net.promote_deadlines(19);
  EXPECT_EQ(peek(net, mid)->rd, kRdOnTimeUnset);
  EXPECT_TRUE(net.fetch(2, 19).empty());
  net.promote_deadlines(20);
  EXPECT_EQ(peek(net, mid)->rd, kRdOnTimeSet);
  EXPECT_EQ(peek(net, mid)->D, 20);
  auto promos = net.drain_promotions();
  ASSERT_EQ(promos.size(), 1u);
  EXPECT_EQ(promos[0].mid, mid);
  EXPECT_EQ(promos[0].rd_to, kRdOnTimeSet);
  auto got = net.fetch(2, 20);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].d_mid, 20);
}

TEST(Diffusion, SetDelayLossyIsUnbounded) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  auto leaks = cast_forced(net, 1, kRdLossyUnset, 10, 20, 10);
  uint64_t mid = leaks[0].mid;
  EXPECT_TRUE(net.set_delay(mid, 1000000));
  EXPECT_EQ(peek(net, mid)->rd, kRdDelayedSet);
  EXPECT_EQ(peek(net, mid)->D, 1000010);
  EXPECT_TRUE(net.fetch(2, 1000009).empty());
  EXPECT_EQ(net.fetch(2, 1000010).size(), 1u);
}

TEST(Diffusion, UnattendedLossyPromotedTwoRoundsOut) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  auto leaks = cast_forced(net, 1, kRdLossyUnset, 10, 20, 10);
  uint64_t mid = leaks[0].mid;
  net.promote_unattended();
  // D = send tick + 2*t_round_sender + 1 = 10 + 21 = 31
  EXPECT_EQ(peek(net, mid)->rd, kRdDelayedSet);
  EXPECT_EQ(peek(net, mid)->D, 31);
  EXPECT_TRUE(net.fetch(2, 30).empty());
  EXPECT_EQ(net.fetch(2, 31).size(), 1u);
}

TEST(Diffusion, MixSwapsUndeterminedStates) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  uint64_t a = cast_forced(net, 1, kRdOnTimeUnset, 0, 10, 10)[0].mid;
  uint64_t b = cast_forced(net, 1, kRdLossyUnset, 0, 10, 10)[0].mid;
  EXPECT_TRUE(net.mix(a, b));
  EXPECT_EQ(peek(net, a)->rd, kRdLossyUnset);
  EXPECT_EQ(peek(net, b)->rd, kRdOnTimeUnset);
  // equal states: swap is a no-op but allowed
  uint64_t c = cast_forced(net, 1, kRdOnTimeUnset, 0, 10, 10)[0].mid;
  EXPECT_TRUE(net.mix(b, c));
  EXPECT_FALSE(net.mix(a, a));
  // determined copies cannot be mixed
  net.set_delay(a, 2);
  EXPECT_TRUE(peek(net, a)->rd == kRdDelayedSet);
  EXPECT_FALSE(net.mix(a, b));
}

TEST(Diffusion, SwapOrderReordersSameRecipientOnly) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  net.register_party(3);
  uint64_t a = cast_forced(net, 1, kRdOnTimeUnset, 0, 10, 10)[0].mid;   // -> 2
  auto second = cast_forced(net, 1, kRdOnTimeUnset, 1, 11, 10);
  uint64_t b2 = second[0].mid;  // -> 2
  uint64_t b3 = second[1].mid;  // -> 3
  EXPECT_FALSE(net.swap_order(a, b3));  // cross-recipient refused
  EXPECT_TRUE(net.swap_order(a, b2));
  net.promote_deadlines(11);
  auto got = net.fetch(2, 11);
  ASSERT_EQ(got.size(), 2u);
  // seq swap: the later send now fetches first
  EXPECT_EQ(got[0].mid, b2);
  EXPECT_EQ(got[1].mid, a);
}

TEST(Diffusion, FetchOnlyReturnsDueSetCopies) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  uint64_t a = cast_forced(net, 1, kRdOnTimeUnset, 0, 10, 10)[0].mid;  // unset: never fetched
  uint64_t b = cast_forced(net, 1, kRdLossyUnset, 0, 10, 10)[0].mid;
  net.set_delay(b, 15);  // rd=3, D=15
  EXPECT_TRUE(net.fetch(2, 14).empty());
  auto got = net.fetch(2, 15);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].mid, b);
  EXPECT_EQ(got[0].d_mid, 15);
  EXPECT_EQ(got[0].rd, kRdDelayedSet);
  // fetched copies are removed
  EXPECT_TRUE(net.fetch(2, 15).empty());
  EXPECT_EQ(peek(net, b), nullptr);
  EXPECT_NE(peek(net, a), nullptr);
  EXPECT_EQ(net.fetched(), 1);
}

TEST(Diffusion, FetchSortsBySeq) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  uint64_t a = cast_forced(net, 1, kRdLossyUnset, 0, 10, 10)[0].mid;
  uint64_t b = cast_forced(net, 1, kRdLossyUnset, 0, 10, 10)[0].mid;
  // set the later copy to an earlier D; queue order must still follow seq
  net.set_delay(b, 1);
  net.set_delay(a, 5);
  auto got = net.fetch(2, 20);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].mid, a);
  EXPECT_EQ(got[1].mid, b);
}

TEST(Diffusion, AdversarialMulticastClampsToNow) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  uint64_t mid = net.adversarial_multicast(9, hello(9), 2, kRdOnTimeSet, 3, 10, 10);
  ASSERT_NE(mid, 0u);
  const auto* e = peek(net, mid);
  EXPECT_EQ(e->D, 10);  // D = max(D, now): no back-dating below the send tick
  EXPECT_EQ(e->D_max, 10);
  EXPECT_EQ(e->rd, kRdOnTimeSet);
  // unregistered recipient: dropped, mid 0
  EXPECT_EQ(net.adversarial_multicast(9, hello(9), 5, kRdOnTimeSet, 0, 10, 10), 0u);
}

TEST(Diffusion, DeregisteredPartyGetsNoNewCopies) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(1);
  net.register_party(2);
  net.deregister_party(2);
  EXPECT_FALSE(net.registered(2));
  auto leaks = net.honest_multicast(1, hello(1), 0, 10, 10);
  EXPECT_EQ(leaks.size(), 1u);
  EXPECT_EQ(leaks[0].recipient, 1);
}

TEST(Diffusion, PromotionEventsDrainOnce) {
  Diffusion net("bc", 1, 1.0);
  net.register_party(2);
  cast_forced(net, 1, kRdLossyUnset, 0, 10, 10);
  net.promote_unattended();
  EXPECT_EQ(net.drain_promotions().size(), 1u);
  EXPECT_TRUE(net.drain_promotions().empty());
}

TEST(Diffusion, PayloadSurvivesDelivery) {
  Diffusion net("tx", 1, 1.0);
  net.register_party(2);
  TxMsg m;
  m.txs.push_back(Tx{123, true, 1, 2, 7});
  net.forced_rd = [](int, int) { return kRdOnTimeSet; };
  net.honest_multicast(1, m, 0, 10, 10);
  net.forced_rd = nullptr;
  auto got = net.fetch(2, 10);
  ASSERT_EQ(got.size(), 1u);
  const auto* tm = std::get_if<TxMsg>(&got[0].m);
  ASSERT_NE(tm, nullptr);
  ASSERT_EQ(tm->txs.size(), 1u);
  EXPECT_EQ(tm->txs[0].amount, 7);
}
