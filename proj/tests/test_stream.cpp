#include <gtest/gtest.h>

#include "procview/stream.hpp"

using namespace procview;

TEST(TimeInterval, FirstElement) {
  EXPECT_EQ(ft(TimeInterval{Message(3), Message(4)}).as_int(), 3);
  try {
    (void)ft(empty_interval());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoFirstElement);
  }
}

TEST(TimedStream, TypeCheckedOnConstruction) {
  EXPECT_THROW(TimedStream(MessageType::integer(), {TimeInterval{Message(true)}}), Error);
  TimedStream s(MessageType::integer(), 3);
  EXPECT_THROW(s.set(1, TimeInterval{Message::event()}), Error);
  EXPECT_NO_THROW(s.set(1, TimeInterval{Message(1), Message(2)}));
  EXPECT_EQ(s.at(1).size(), 2u);
}

TEST(TimedStream, HorizonIsExplicit) {
  TimedStream s(MessageType::event(), 4);
  EXPECT_EQ(s.horizon(), 4u);
  EXPECT_TRUE(s.at(3).empty());
  try {
    (void)s.at(4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HorizonExceeded);
  }
}

TEST(TimedStream, WithLeavesOriginalUntouched) {
  const TimedStream a(MessageType::event(), 2);
  const TimedStream b = a.with(0, event_interval());
  EXPECT_TRUE(a.at(0).empty());
  EXPECT_FALSE(b.at(0).empty());
}

TEST(TimedStream, MsgBound) {
  TimedStream s(MessageType::integer(), 3);
  s.set(0, TimeInterval{Message(1)});
  EXPECT_TRUE(msg_bound(1, s));
  s.set(2, TimeInterval{Message(1), Message(2)});
  EXPECT_FALSE(msg_bound(1, s));
  EXPECT_TRUE(msg_bound(2, s));
}

TEST(TimedStream, Disjoint) {
  const auto a = event_stream(5, {0, 2});
  const auto b = event_stream(5, {1, 3});
  const auto c = event_stream(5, {2});
  EXPECT_TRUE(disjoint(std::vector<TimedStream>{a, b}));
  EXPECT_FALSE(disjoint(std::vector<TimedStream>{a, b, c}));
  EXPECT_THROW(disjoint(std::vector<TimedStream>{a, event_stream(4, {})}), Error);
  EXPECT_THROW(disjoint(std::vector<TimedStream>{}), Error);
}

TEST(Message, TypeConformance) {
  const auto color = MessageType::enumeration({"Red", "Green"});
  EXPECT_TRUE(conforms(Message::symbol("Red"), color));
  EXPECT_FALSE(conforms(Message::symbol("Blue"), color));
  EXPECT_FALSE(conforms(Message(1), MessageType::boolean()));
  EXPECT_TRUE(conforms(Message::event(), MessageType::event()));
  EXPECT_EQ(to_string(Message::event()), "√");
}
