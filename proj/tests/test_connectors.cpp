#include <gtest/gtest.h>

#include "procview/connectors.hpp"
#include "procview/simulation.hpp"

using namespace procview;

namespace {

// Runs one connector on its own with the given event ticks per input port.
Trace run_alone(const Component& c, const std::map<std::string, std::vector<Tick>>& events, std::size_t horizon) {
  NetworkBuilder b;
  b.add(c);
  const Network n = b.build();
  EnvInputs env;
  for (const auto& p : c.in_ports()) {
    TimedStream s(MessageType::event(), horizon);
    if (auto it = events.find(p.name); it != events.end())
      for (Tick t : it->second) s.set(t, event_interval());
    env[n.channel_of({c.name(), p.name})] = s;
  }
  return run(n, env, horizon);
}

std::vector<Tick> out_ticks(const Trace& tr, const Component& c, const std::string& port) {
  return tr.event_ticks(c.name() + "." + port);
}

}  // namespace

TEST(Join, TruthTable) {
  const Component amp = amp_connector();
  for (Tick tx = 0; tx <= 4; ++tx)
    for (Tick ty = 0; ty <= 4; ++ty) {
      const Trace tr = run_alone(amp, {{"x", {tx}}, {"y", {ty}}}, 8);
      EXPECT_EQ(out_ticks(tr, amp, "z"), std::vector<Tick>{std::max(tx, ty)}) << tx << "," << ty;
    }
  EXPECT_TRUE(out_ticks(run_alone(amp, {{"x", {2}}}, 8), amp, "z").empty());
  EXPECT_TRUE(out_ticks(run_alone(amp, {}, 8), amp, "z").empty());
}

TEST(Join, ForgetsArrivalsAfterFiring) {
  const Component amp = amp_connector();
  // Repeated x before y collapses into one arrival; the later y needs a fresh x.
  EXPECT_EQ(out_ticks(run_alone(amp, {{"x", {0, 1}}, {"y", {2, 5}}}, 8), amp, "z"), std::vector<Tick>{2});
  EXPECT_EQ(out_ticks(run_alone(amp, {{"x", {0, 4}}, {"y", {2, 5}}}, 8), amp, "z"), (std::vector<Tick>{2, 5}));
}

TEST(Split, FixedChoice) {
  const Component left = at_connector(FixedChoice{Branch::Left});
  const Trace tr = run_alone(left, {{"ent", {1, 3}}}, 5);
  EXPECT_EQ(out_ticks(tr, left, "o_left"), (std::vector<Tick>{1, 3}));
  EXPECT_TRUE(out_ticks(tr, left, "o_right").empty());
}

TEST(Split, RoundRobinAlternates) {
  const Component rr = at_connector(RoundRobin{});
  const Trace tr = run_alone(rr, {{"ent", {0, 1, 2, 3}}}, 5);
  EXPECT_EQ(out_ticks(tr, rr, "o_left"), (std::vector<Tick>{0, 2}));
  EXPECT_EQ(out_ticks(tr, rr, "o_right"), (std::vector<Tick>{1, 3}));
}

TEST(Split, SeededRandomIsReproducibleAndExclusive) {
  const Component a = at_connector(SeededRandom{42});
  std::vector<Tick> all;
  for (Tick t = 0; t < 40; ++t) all.push_back(t);
  const Trace t1 = run_alone(a, {{"ent", all}}, 40);
  const Trace t2 = run_alone(a, {{"ent", all}}, 40);
  EXPECT_EQ(t1, t2);
  const auto l = out_ticks(t1, a, "o_left"), r = out_ticks(t1, a, "o_right");
  EXPECT_EQ(l.size() + r.size(), 40u);
  EXPECT_FALSE(l.empty());
  EXPECT_FALSE(r.empty());
  EXPECT_TRUE(disjoint(std::vector<TimedStream>{t1.stream("@.o_left"), t1.stream("@.o_right")}));
}

TEST(Merge, ForwardsEitherAndFlagsCollisions) {
  const Component plus = plus_connector();
  const Trace tr = run_alone(plus, {{"x", {1, 4}}, {"y", {2, 4}}}, 6);
  EXPECT_EQ(out_ticks(tr, plus, "z"), (std::vector<Tick>{1, 2, 4}));
  ASSERT_EQ(tr.warnings.size(), 1u);
  EXPECT_EQ(tr.warnings[0].kind, WarningKind::MergeCollision);
  EXPECT_EQ(tr.warnings[0].tick, 4u);
}

TEST(Delay, RejectsZeroDelay) {
  EXPECT_THROW(delay_component(0, Autonomous{}), Error);
  EXPECT_THROW(delay_component(0, NonAutonomous{}), Error);
  EXPECT_THROW(delay_component(1, NonAutonomous{RestartPolicy{false, 0}}), Error);
  try {
    delay_component(0, Autonomous{});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZenoRisk);
  }
}

TEST(Delay, AutonomousFiresAtZeroThenAfterEachExit) {
  const Component d = delay_component(3, Autonomous{});
  EXPECT_EQ(d.causality(), Causality::Strict);
  const Trace tr = run_alone(d, {{"extD", {2, 10}}}, 16);
  // Strict: an exit at t is seen at t+1 and the next start follows d ticks after the exit.
  EXPECT_EQ(out_ticks(tr, d, "entD"), (std::vector<Tick>{0, 5, 13}));
}

TEST(Delay, GateForwardsOneTickLater) {
  const Component d = delay_component(1, NonAutonomous{});
  const Trace tr = run_alone(d, {{"entP", {0}}, {"extD", {4}}}, 8);
  EXPECT_EQ(out_ticks(tr, d, "entD"), std::vector<Tick>{1});
}

TEST(Delay, GateDropsStartsWhileRunning) {
  const Component d = delay_component(1, NonAutonomous{});
  const Trace tr = run_alone(d, {{"entP", {0, 2, 6}}, {"extD", {4}}}, 9);
  EXPECT_EQ(out_ticks(tr, d, "entD"), (std::vector<Tick>{1, 7}));
  ASSERT_EQ(tr.warnings.size(), 1u);
  EXPECT_EQ(tr.warnings[0].kind, WarningKind::RestartWhileRunning);
}

TEST(Delay, GateHonoursMinimumGap) {
  const Component d = delay_component(1, NonAutonomous{RestartPolicy{true, 3}});
  const Trace tr = run_alone(d, {{"entP", {0, 1, 3}}}, 6);
  EXPECT_EQ(out_ticks(tr, d, "entD"), (std::vector<Tick>{1, 4}));
  ASSERT_EQ(tr.warnings.size(), 1u);
  EXPECT_EQ(tr.warnings[0].kind, WarningKind::RestartTooSoon);
}
