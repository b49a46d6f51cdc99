#include <gtest/gtest.h>

#include "procview/activity.hpp"
#include "support/generators.hpp"

using namespace procview;

namespace {

// Two-output process emitting a on its first active tick and b on its last.
std::shared_ptr<const ElementaryProcessSpec> two_outputs() {
  ElementaryProcessSpec s;
  s.name = "P";
  s.channels = {{"a", MessageType::event(), Direction::Output}, {"b", MessageType::event(), Direction::Output}};
  s.behavior.locals = {{"n", MessageType::integer(), Message(0)}};
  s.behavior.init_process = {Assignment::local("n", lit(Message(0)))};
  s.behavior.pr_ending = binary(BinaryOp::Ge, ref("n"), lit(Message(2)));
  s.behavior.pr_calc = {Assignment::output("a", {lit(Message::event())}),
                        Assignment::local("n", binary(BinaryOp::Add, ref("n"), lit(Message(1))))};
  s.behavior.pr_calc_f = std::vector<Assignment>{Assignment::output("b", {lit(Message::event())})};
  return std::make_shared<const ElementaryProcessSpec>(std::move(s));
}

struct Fixture {
  Network n = compile(seq(elem(two_outputs()), fixtures::timer(1)));
  Trace tr = run(n, start_env(n, 8), 8);
  OutputSet p = outputs_of(n, "P");
};

}  // namespace

// Timeline: start@0, P active 1..3, a@1,2, b@3 with stop@3, T stop@4.
TEST(Activity, OutputSetIncludesStop) {
  Fixture f;
  ASSERT_EQ(f.p.ports.size(), 3u);
  EXPECT_NE(f.p.channel_for("stop"), nullptr);
  EXPECT_NE(f.p.channel_for("a"), nullptr);
}

TEST(Activity, ActiveOnStream) {
  Fixture f;
  EXPECT_TRUE(active_on(f.tr, f.p, 1, "a"));
  EXPECT_FALSE(active_on(f.tr, f.p, 3, "a"));
  EXPECT_TRUE(active_on(f.tr, f.p, 3, "b"));
  EXPECT_THROW(active_on(f.tr, f.p, 1, "zz"), Error);
  EXPECT_THROW(active_on(f.tr, f.p, 8, "a"), Error);
}

TEST(Activity, OnlyOnStream) {
  Fixture f;
  EXPECT_TRUE(active_only_on(f.tr, f.p, 1, "a"));
  EXPECT_FALSE(active_only_on(f.tr, f.p, 3, "b"));  // stop fires with b
}

TEST(Activity, BoundedCounts) {
  Fixture f;
  EXPECT_TRUE(active_bounded(f.tr, f.p, 3, BoundKind::Exact, 2));
  EXPECT_TRUE(active_bounded(f.tr, f.p, 1, BoundKind::Exact, 1));
  EXPECT_TRUE(active_bounded(f.tr, f.p, 0, BoundKind::Exact, 0));
  EXPECT_TRUE(active_bounded(f.tr, f.p, 3, BoundKind::Upper, 3));
  EXPECT_FALSE(active_bounded(f.tr, f.p, 3, BoundKind::Lower, 3));
  EXPECT_THROW(active_bounded(f.tr, f.p, 3, BoundKind::Lower, 4), Error);
}

TEST(Activity, SetsOfComponents) {
  Fixture f;
  const std::vector<OutputSet> set{f.p, outputs_of(f.n, "T")};
  EXPECT_TRUE(active_set(f.tr, set, 3, SetKind::Exact, 1));
  EXPECT_TRUE(active_set(f.tr, set, 4, SetKind::Exact, 1));
  EXPECT_FALSE(active_set(f.tr, set, 0, SetKind::Any, 0));
  EXPECT_EQ(active_set(f.tr, set, 3, SetKind::Lower, 1, SetCounting::ComponentActive),
            active_set(f.tr, set, 3, SetKind::Lower, 1, SetCounting::StreamExistential));
  EXPECT_THROW(active_set(f.tr, set, 3, SetKind::Lower, 3), Error);
}

TEST(Activity, Disjointness) {
  Fixture f;
  const auto r = disjoint_outputs_check(f.tr, f.p);
  EXPECT_FALSE(r.exactly_one_always);
  EXPECT_FALSE(r.disjoint);  // b and stop coincide
  EXPECT_TRUE(r.implication_holds);
}

TEST(Activity, QueryEvaluation) {
  Fixture f;
  ActivityQuery q;
  q.kind = QueryKind::OnStream;
  q.subject = {"P"};
  q.stream = "a";
  const auto all = evaluate(q, f.tr, f.n);
  EXPECT_FALSE(all.holds);
  EXPECT_EQ(all.holding_ticks, (std::vector<Tick>{1, 2}));
  q.tick = 2;
  EXPECT_TRUE(evaluate(q, f.tr, f.n).holds);

  ActivityQuery bad;
  bad.kind = QueryKind::Any;
  bad.subject = {"P", "T"};
  EXPECT_THROW(evaluate(bad, f.tr, f.n), Error);
}
