#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "procview/component.hpp"

namespace procview {

enum class Branch { Left, Right };

struct RoundRobin {
  friend bool operator==(const RoundRobin&, const RoundRobin&) = default;
};
struct FixedChoice {
  Branch branch = Branch::Left;
  friend bool operator==(const FixedChoice&, const FixedChoice&) = default;
};
struct SeededRandom {
  std::uint64_t seed = 0;
  friend bool operator==(const SeededRandom&, const SeededRandom&) = default;
};

/// How the `@` split picks the branch to start.
using ChooserPolicy = std::variant<RoundRobin, FixedChoice, SeededRandom>;

struct RestartPolicy {
  bool allow_restart_while_running = false;
  Tick min_gap_ticks = 1;
  friend bool operator==(const RestartPolicy&, const RestartPolicy&) = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline ChannelDecl ev_in(std::string n) { return {std::move(n), MessageType::event(), Direction::Input}; }
inline ChannelDecl ev_out(std::string n) { return {std::move(n), MessageType::event(), Direction::Output}; }

}  // namespace detail

/// `&` join: fires z once both x and y have arrived, simultaneously or one
/// after another, then forgets both arrivals.
inline Component amp_connector(std::string name = "&") {
  auto behavior = make_behavior([](Tick, const PortValues& in, const State& s) {
    StepResult r;
    bool x_ready = s.at("xReady").as_bool() || !in.at("x").empty();
    bool y_ready = s.at("yReady").as_bool() || !in.at("y").empty();
    const bool fire = x_ready && y_ready;
    if (fire) x_ready = y_ready = false;
    r.outputs["z"] = fire ? event_interval() : empty_interval();
    r.next_state = {{"xReady", Message(x_ready)}, {"yReady", Message(y_ready)}};
    return r;
  });
  return Component(std::move(name), ComponentKind::Join, {detail::ev_in("x"), detail::ev_in("y")},
                   {detail::ev_out("z")}, Causality::Weak,
                   {{"xReady", Message(false)}, {"yReady", Message(false)}}, std::move(behavior),
                   {msg_bound_assumption(1, "x"), msg_bound_assumption(1, "y")});
}

/// `@` split: forwards each incoming event to exactly one of o_left/o_right.
inline Component at_connector(const ChooserPolicy& policy, std::string name = "@") {
  State init;
  if (std::holds_alternative<RoundRobin>(policy)) init["next_right"] = Message(false);
  if (const auto* r = std::get_if<SeededRandom>(&policy))
    init["rng"] = Message(static_cast<std::int64_t>(r->seed));

  auto behavior = make_behavior([policy](Tick, const PortValues& in, const State& s) {
    StepResult r;
    r.next_state = s;
    r.outputs["o_left"] = empty_interval();
    r.outputs["o_right"] = empty_interval();
    if (in.at("ent").empty()) return r;

    Branch choice = Branch::Left;
    if (std::holds_alternative<RoundRobin>(policy)) {
      const bool right = s.at("next_right").as_bool();
      choice = right ? Branch::Right : Branch::Left;
      r.next_state["next_right"] = Message(!right);
    } else if (const auto* f = std::get_if<FixedChoice>(&policy)) {
      choice = f->branch;
    } else {
      auto x = static_cast<std::uint64_t>(s.at("rng").as_int());
      const std::uint64_t draw = detail::splitmix64(x);
      r.next_state["rng"] = Message(static_cast<std::int64_t>(x));
      choice = (draw & 1U) ? Branch::Right : Branch::Left;
    }
    r.outputs[choice == Branch::Left ? "o_left" : "o_right"] = event_interval();
    return r;
  });
  return Component(std::move(name), ComponentKind::Split, {detail::ev_in("ent")},
                   {detail::ev_out("o_left"), detail::ev_out("o_right")}, Causality::Weak,
                   std::move(init), std::move(behavior), {msg_bound_assumption(1, "ent")});
}

/// `+` merge: z fires whenever x or y does. Both at once breaches the
/// disjointness the alternate composition guarantees; one event is emitted
/// and a MergeCollision warning recorded.
inline Component plus_connector(std::string name = "+") {
  auto behavior = make_behavior([](Tick, const PortValues& in, const State& s) {
    StepResult r;
    r.next_state = s;
    const bool x = !in.at("x").empty();
    const bool y = !in.at("y").empty();
    r.outputs["z"] = (x || y) ? event_interval() : empty_interval();
    if (x && y) r.warnings.push_back(WarningKind::MergeCollision);
    return r;
  });
  return Component(std::move(name), ComponentKind::Merge, {detail::ev_in("x"), detail::ev_in("y")},
                   {detail::ev_out("z")}, Causality::Weak, {}, std::move(behavior));
}

struct Autonomous {
  friend bool operator==(const Autonomous&, const Autonomous&) = default;
};
struct NonAutonomous {
  RestartPolicy policy;
  friend bool operator==(const NonAutonomous&, const NonAutonomous&) = default;
};
using DelayMode = std::variant<Autonomous, NonAutonomous>;

/// Strict-causal loop timer.
///
/// Autonomous (ports extD → entD): starts the body at tick 0 and again
/// exactly `d` ticks after each body exit.
///
/// Non-autonomous (ports entP, extD → entD): forwards an external start to
/// the body one tick later. A start arriving while the body runs is dropped
/// with a warning unless restarts are allowed, and starts closer than
/// `min_gap_ticks` to the previous forwarded one are dropped too. The body's
/// exit is the loop's exit, so the network exposes extD directly as extP.
inline Component delay_component(Tick d, const DelayMode& mode, std::string name = "delay") {
  if (d < 1) throw Error(ErrorCode::ZenoRisk, "loop delay must be at least one tick");

  if (std::holds_alternative<Autonomous>(mode)) {
    auto behavior = make_behavior([d](Tick, const PortValues& prev, const State& s) {
      StepResult r;
      r.next_state = s;
      bool fire = !s.at("started").as_bool();
      r.next_state["started"] = Message(true);
      std::int64_t countdown = s.at("countdown").as_int();
      if (!prev.at("extD").empty()) countdown = static_cast<std::int64_t>(d) - 1;
      else if (countdown > 0) --countdown;
      else countdown = -1;
      if (countdown == 0) {
        fire = true;
        countdown = -1;
      }
      r.next_state["countdown"] = Message(countdown);
      r.outputs["entD"] = fire ? event_interval() : empty_interval();
      return r;
    });
    return Component(std::move(name), ComponentKind::Delay, {detail::ev_in("extD")},
                     {detail::ev_out("entD")}, Causality::Strict,
                     {{"started", Message(false)}, {"countdown", Message(std::int64_t{-1})}},
                     std::move(behavior));
  }

  const RestartPolicy policy = std::get<NonAutonomous>(mode).policy;
  if (policy.min_gap_ticks < 1) throw Error(ErrorCode::ZenoRisk, "min_gap_ticks must be at least one");
  auto behavior = make_behavior([policy](Tick t, const PortValues& prev, const State& s) {
    StepResult r;
    r.next_state = s;
    r.outputs["entD"] = empty_interval();
    bool running = s.at("running").as_bool();
    if (!prev.at("extD").empty()) running = false;
    if (!prev.at("entP").empty()) {
      const std::int64_t last = s.at("last_start").as_int();
      if (running && !policy.allow_restart_while_running) {
        r.warnings.push_back(WarningKind::RestartWhileRunning);
      } else if (last >= 0 && static_cast<std::int64_t>(t) - last < static_cast<std::int64_t>(policy.min_gap_ticks)) {
        r.warnings.push_back(WarningKind::RestartTooSoon);
      } else {
        r.outputs["entD"] = event_interval();
        running = true;
        r.next_state["last_start"] = Message(static_cast<std::int64_t>(t));
      }
    }
    r.next_state["running"] = Message(running);
    return r;
  });
  return Component(std::move(name), ComponentKind::Delay, {detail::ev_in("entP"), detail::ev_in("extD")},
                   {detail::ev_out("entD")}, Causality::Strict,
                   {{"running", Message(false)}, {"last_start", Message(std::int64_t{-1})}},
                   std::move(behavior), {msg_bound_assumption(1, "entP")});
}

}  // namespace procview
