#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "procview/error.hpp"
#include "procview/message.hpp"

namespace procview {

using Tick = std::size_t;

/// One time interval of a timed stream: a finite, ordered message sequence.
class TimeInterval {
 public:
  TimeInterval() = default;
  TimeInterval(std::initializer_list<Message> msgs) : messages_(msgs) {}
  explicit TimeInterval(std::vector<Message> msgs) : messages_(std::move(msgs)) {}

  bool empty() const { return messages_.empty(); }
  std::size_t size() const { return messages_.size(); }
  const std::vector<Message>& messages() const { return messages_; }
  const Message& operator[](std::size_t i) const { return messages_.at(i); }

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;

 private:
  std::vector<Message> messages_;
};

/// ⟨⟩
inline TimeInterval empty_interval() { return {}; }

/// ⟨m⟩
inline TimeInterval singleton(Message m) { return TimeInterval{std::move(m)}; }

inline TimeInterval event_interval() { return singleton(Message::event()); }

/// First message of an interval.
inline const Message& ft(const TimeInterval& i) {
  if (i.empty()) throw Error(ErrorCode::NoFirstElement, "ft of an empty interval");
  return i[0];
}

/// Finite prefix of a timed stream over an explicit horizon. Every message
/// is checked against the channel type on construction.
class TimedStream {
 public:
  TimedStream() = default;

  TimedStream(MessageType type, std::size_t horizon)
      : type_(std::move(type)), intervals_(horizon) {}

  TimedStream(MessageType type, std::vector<TimeInterval> intervals)
      : type_(std::move(type)), intervals_(std::move(intervals)) {
    for (Tick t = 0; t < intervals_.size(); ++t) check(intervals_[t], t);
  }

  const MessageType& type() const { return type_; }
  std::size_t horizon() const { return intervals_.size(); }

  const TimeInterval& at(Tick t) const {
    if (t >= intervals_.size())
      throw Error(ErrorCode::HorizonExceeded,
                  "tick " + std::to_string(t) + " >= horizon " + std::to_string(horizon()));
    return intervals_[t];
  }

  const std::vector<TimeInterval>& intervals() const { return intervals_; }

  /// Returns a copy with interval t replaced.
  TimedStream with(Tick t, TimeInterval i) const {
    TimedStream copy = *this;
    copy.set(t, std::move(i));
    return copy;
  }

  /// Builder-side mutation; used while a stream is being assembled.
  void set(Tick t, TimeInterval i) {
    if (t >= intervals_.size())
      throw Error(ErrorCode::HorizonExceeded,
                  "tick " + std::to_string(t) + " >= horizon " + std::to_string(horizon()));
    check(i, t);
    intervals_[t] = std::move(i);
  }

  friend bool operator==(const TimedStream&, const TimedStream&) = default;

 private:
  void check(const TimeInterval& i, Tick t) const {
    for (const auto& m : i.messages())
      if (!conforms(m, type_))
        throw Error(ErrorCode::TypeMismatch, "message " + to_string(m) + " at tick " +
                                                 std::to_string(t) + " is not of type " +
                                                 to_string(type_));
  }

  MessageType type_ = MessageType::event();
  std::vector<TimeInterval> intervals_;
};

inline TimeInterval interval_at(const TimedStream& s, Tick t) { return s.at(t); }

/// Event stream of the given horizon with ⟨√⟩ exactly at the listed ticks.
inline TimedStream event_stream(std::size_t horizon, std::initializer_list<Tick> ticks) {
  TimedStream s(MessageType::event(), horizon);
  for (Tick t : ticks) s.set(t, event_interval());
  return s;
}

/// msg(n, s): at most n messages in every interval.
inline bool msg_bound(std::size_t n, const TimedStream& s) {
  for (const auto& i : s.intervals())
    if (i.size() > n) return false;
  return true;
}

/// At every tick at most one of the streams carries messages.
inline bool disjoint(std::span<const TimedStream* const> streams) {
  if (streams.empty()) throw Error(ErrorCode::HorizonMismatch, "disjoint of an empty set");
  const std::size_t horizon = streams.front()->horizon();
  for (const auto* s : streams)
    if (s->horizon() != horizon)
      throw Error(ErrorCode::HorizonMismatch, "streams have different horizons");
  for (Tick t = 0; t < horizon; ++t) {
    int nonempty = 0;
    for (const auto* s : streams)
      if (!s->at(t).empty() && ++nonempty > 1) return false;
  }
  return true;
}

inline bool disjoint(const std::vector<TimedStream>& streams) {
  std::vector<const TimedStream*> ptrs;
  ptrs.reserve(streams.size());
  for (const auto& s : streams) ptrs.push_back(&s);
  return disjoint(std::span<const TimedStream* const>(ptrs));
}

/// Port or channel valuation at a single tick.
using PortValues = std::map<std::string, TimeInterval>;

}  // namespace procview
