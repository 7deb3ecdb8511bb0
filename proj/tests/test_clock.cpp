#include <gtest/gtest.h>

#include <autosyn/clock.hpp>

using namespace autosyn;

TEST(AutoClock, StartsAtMinusTStartAndStopsAtGenesis) {
  AutoClock clk(100, 4);
  EXPECT_EQ(clk.now(), -100);
  EXPECT_EQ(clk.next(), 0);
  int steps = 0;
  while (clk.advance()) ++steps;
  EXPECT_EQ(steps, 100);
  EXPECT_EQ(clk.now(), 0);
  EXPECT_FALSE(clk.advance());  // gated at NEXT until a round update lands
}

TEST(AutoClock, RoundUpdateTakesMajorityPlusTRun) {
  AutoClock clk(0, 10);
  for (int id : {1, 2, 3}) clk.register_party(id);
  clk.functionalities_ready();
  clk.report(1, 40);
  clk.report(2, 40);
  EXPECT_EQ(clk.next(), 0);  // party 3 still unflagged
  clk.report(3, 60);
  EXPECT_EQ(clk.next(), 50);  // majority 40, plus t_run
  EXPECT_EQ(clk.round_updates(), 1);
}

TEST(AutoClock, MajorityTieBreaksToSmallest) {
  AutoClock clk(0, 10);
  clk.register_party(1);
  clk.register_party(2);
  clk.functionalities_ready();
  clk.report(1, 40);
  clk.report(2, 60);
  EXPECT_EQ(clk.next(), 50);  // 1-1 tie: smallest value wins
}

TEST(AutoClock, AllBottomReportsDoNotUpdate) {
  AutoClock clk(0, 10);
  clk.register_party(1);
  clk.register_party(2);
  clk.functionalities_ready();
  clk.report(1, std::nullopt);
  clk.report(2, std::nullopt);
  EXPECT_EQ(clk.next(), 0);
  EXPECT_EQ(clk.round_updates(), 0);
  // a single non-⊥ report among ⊥s carries the update
  clk.functionalities_ready();
  clk.report(1, std::nullopt);
  clk.report(2, 5);
  EXPECT_EQ(clk.next(), 15);
}

TEST(AutoClock, BottomIsStillAFlag) {
  AutoClock clk(0, 10);
  clk.register_party(1);
  clk.register_party(2);
  clk.functionalities_ready();
  clk.report(1, 30);
  EXPECT_EQ(clk.next(), 0);
  clk.report(2, std::nullopt);  // flags party 2; majority over non-⊥ is 30
  EXPECT_EQ(clk.next(), 40);
}

TEST(AutoClock, NextNeverFallsBehindNow) {
  AutoClock clk(0, 2);
  clk.register_party(1);
  clk.functionalities_ready();
  clk.report(1, 20);
  EXPECT_EQ(clk.next(), 22);
  while (clk.advance()) {
  }
  EXPECT_EQ(clk.now(), 22);
  // stale report would put NEXT at 2+3=5 < NOW; the max() guard pins it at NOW
  clk.functionalities_ready();
  clk.report(1, 3);
  EXPECT_EQ(clk.next(), 22);
}

TEST(AutoClock, FlagsClearAfterUpdate) {
  AutoClock clk(0, 10);
  clk.register_party(1);
  clk.register_party(2);
  clk.functionalities_ready();
  clk.report(1, 40);
  clk.report(2, 40);
  EXPECT_EQ(clk.round_updates(), 1);
  // both flags consumed: a single new report cannot trigger the next update
  clk.functionalities_ready();
  clk.report(1, 80);
  EXPECT_EQ(clk.round_updates(), 1);
  clk.report(2, 80);
  EXPECT_EQ(clk.round_updates(), 2);
  EXPECT_EQ(clk.next(), 90);
}

TEST(AutoClock, FunctionalitiesReadyIsConsumed) {
  AutoClock clk(0, 10);
  clk.register_party(1);
  clk.report(1, 40);
  EXPECT_EQ(clk.round_updates(), 0);  // func set not ready yet
  clk.functionalities_ready();
  EXPECT_EQ(clk.round_updates(), 1);
  // readiness was consumed by the update; a lone report stays pending
  clk.report(1, 90);
  EXPECT_EQ(clk.round_updates(), 1);
}

TEST(AutoClock, DeregisteredPartyDoesNotGate) {
  AutoClock clk(0, 10);
  clk.register_party(1);
  clk.register_party(2);
  clk.deregister_party(2);
  EXPECT_FALSE(clk.registered(2));
  clk.functionalities_ready();
  clk.report(1, 40);
  EXPECT_EQ(clk.next(), 50);
}

TEST(AutoClock, UnregisteredReportIgnored) {
  AutoClock clk(0, 10);
  clk.register_party(1);
  clk.functionalities_ready();
  clk.report(9, 40);  // not in the wait set
  EXPECT_EQ(clk.round_updates(), 0);
  clk.report(1, 40);
  EXPECT_EQ(clk.round_updates(), 1);
}

TEST(AutoClock, EmptyWaitSetNeverUpdates) {
  AutoClock clk(0, 10);
  clk.functionalities_ready();
  EXPECT_EQ(clk.round_updates(), 0);
  EXPECT_EQ(clk.next(), 0);
}

TEST(AutoClock, MajorityHelper) {
  using V = std::vector<std::optional<int64_t>>;
  EXPECT_EQ(AutoClock::majority(V{10, 10, 20}), 10);
  EXPECT_EQ(AutoClock::majority(V{20, 10, 20}), 20);
  EXPECT_EQ(AutoClock::majority(V{std::nullopt, std::nullopt}), std::nullopt);
  EXPECT_EQ(AutoClock::majority(V{std::nullopt, 7}), 7);
  EXPECT_EQ(AutoClock::majority(V{}), std::nullopt);
}
