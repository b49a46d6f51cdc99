#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "procview/composition.hpp"

namespace procview {

struct ProcessMode {
  bool active = false;
  friend bool operator==(const ProcessMode&, const ProcessMode&) = default;
};

struct TraceWarning {
  Tick tick = 0;
  WarningKind kind = WarningKind::RestartWhileActive;
  std::string location;
  friend bool operator==(const TraceWarning&, const TraceWarning&) = default;
};

/// Record of every channel over the horizon plus per-process mode history.
/// modes[c][t] is the mode process c is in during tick t.
struct Trace {
  std::size_t horizon = 0;
  std::map<std::string, TimedStream> channels;
  std::map<std::string, std::vector<ProcessMode>> modes;
  std::vector<TraceWarning> warnings;
  /// First tick with an assumption violation; behaviour from there on is
  /// unconstrained by the component guarantees.
  std::optional<Tick> unconstrained_from;

  const TimedStream& stream(const std::string& channel) const {
    auto it = channels.find(channel);
    if (it == channels.end()) throw Error(ErrorCode::UnknownStream, channel);
    return it->second;
  }

  /// Ticks at which `channel` carries at least one message.
  std::vector<Tick> event_ticks(const std::string& channel) const {
    std::vector<Tick> out;
    const auto& s = stream(channel);
    for (Tick t = 0; t < s.horizon(); ++t)
      if (!s.at(t).empty()) out.push_back(t);
    return out;
  }

  friend bool operator==(const Trace&, const Trace&) = default;
};

using EnvInputs = std::map<std::string, TimedStream>;

/// Environment for `n` with every external input silent except those given.
inline EnvInputs complete_env(const Network& n, std::size_t horizon, EnvInputs given = {}) {
  EnvInputs env;
  for (const auto& ch : n.external_inputs()) {
    auto it = given.find(ch);
    if (it != given.end()) {
      env[ch] = std::move(it->second);
      given.erase(it);
    } else {
      env[ch] = TimedStream(n.channel(ch).type, horizon);
    }
  }
  if (!given.empty()) throw Error(ErrorCode::UnknownChannel, given.begin()->first + " is not an external input");
  return env;
}

/// Convenience: entry event at tick 0 (or the listed ticks), everything else silent.
inline EnvInputs start_env(const Network& n, std::size_t horizon, std::initializer_list<Tick> ticks = {0}) {
  if (!n.entry()) throw Error(ErrorCode::NoEntryPoint, "network has no entry point");
  EnvInputs given;
  given[*n.entry()] = event_stream(horizon, ticks);
  return complete_env(n, horizon, std::move(given));
}

/// Evaluation order over same-tick dependencies. An edge A→B exists when a
/// weak-causal B reads a channel A drives; strict components read the
/// previous tick and so break cycles. Ties are broken by insertion order.
inline std::vector<std::string> schedule(const Network& n) {
  const auto& comps = n.components();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < comps.size(); ++i) index[comps[i].name()] = i;

  std::vector<std::set<std::size_t>> succ(comps.size());
  std::vector<std::size_t> indeg(comps.size(), 0);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].causality() == Causality::Strict) continue;
    for (const auto& p : comps[i].in_ports()) {
      const auto& ch = n.channel(n.channel_of({comps[i].name(), p.name}));
      if (!ch.driver) continue;
      const std::size_t from = index.at(ch.driver->component);
      if (succ[from].insert(i).second) ++indeg[i];
    }
  }

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    order.push_back(comps[i].name());
    for (std::size_t j : succ[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (order.size() != comps.size()) {
    std::string stuck;
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (indeg[i] > 0) stuck += (stuck.empty() ? "" : ", ") + comps[i].name();
    throw Error(ErrorCode::CausalityCycle, "same-tick cycle without a strict-causal component through " + stuck);
  }
  return order;
}

struct AssumptionViolation {
  std::string component;  // component name, or `network` for composite obligations
  Tick tick = 0;
  std::string predicate;
  friend bool operator==(const AssumptionViolation&, const AssumptionViolation&) = default;
};

/// Evaluates component and composite assumptions against a trace.
inline std::vector<AssumptionViolation> check_assumptions(const Network& n, const Trace& trace) {
  std::vector<AssumptionViolation> out;
  for (const auto& c : n.components()) {
    if (c.assumptions().empty()) continue;
    for (Tick t = 0; t < trace.horizon; ++t) {
      PortValues in;
      for (const auto& p : c.in_ports()) in[p.name] = trace.stream(n.channel_of({c.name(), p.name})).at(t);
      for (const auto& a : c.assumptions())
        if (!a.holds(in)) out.push_back({c.name(), t, a.label});
    }
  }
  for (const auto& a : n.assumptions()) {
    bool pending = false;
    const auto& start = trace.stream(a.start_channel);
    const auto& done = trace.stream(a.done_channel);
    for (Tick t = 0; t < trace.horizon; ++t) {
      if (!start.at(t).empty()) {
        if (pending) out.push_back({"network", t, a.label});
        pending = true;
      }
      if (!done.at(t).empty()) pending = false;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.tick, x.component, x.predicate) < std::tie(y.tick, y.component, y.predicate);
  });
  return out;
}

/// Synchronous execution over [0, horizon). Each tick every component is
/// stepped once in schedule order; weak components see the current tick's
/// intervals, strict ones the previous tick's.
inline Trace run(const Network& n, const EnvInputs& env, std::size_t horizon) {
  const std::vector<std::string> order = schedule(n);

  for (const auto& ch : n.external_inputs()) {
    auto it = env.find(ch);
    if (it == env.end()) throw Error(ErrorCode::MissingEnvInput, ch);
    if (it->second.horizon() != horizon)
      throw Error(ErrorCode::HorizonMismatch, ch + " has horizon " + std::to_string(it->second.horizon()));
    if (it->second.type() != n.channel(ch).type) throw Error(ErrorCode::TypeMismatch, "environment stream " + ch);
  }
  for (const auto& [ch, s] : env)
    if (!n.channels().count(ch) || n.channel(ch).driver)
      throw Error(ErrorCode::UnknownChannel, ch + " is not an external input");

  Trace trace;
  trace.horizon = horizon;
  for (const auto& [name, ch] : n.channels())
    trace.channels[name] = ch.driver ? TimedStream(ch.type, horizon) : env.at(name);

  std::map<std::string, State> states;
  for (const auto& c : n.components()) {
    states[c.name()] = c.initial_state();
    if (c.kind() == ComponentKind::Process) trace.modes[c.name()].reserve(horizon);
  }

  for (Tick t = 0; t < horizon; ++t) {
    for (const auto& name : order) {
      const Component& c = n.component(name);
      const bool strict = c.causality() == Causality::Strict;
      PortValues in;
      for (const auto& p : c.in_ports()) {
        const auto& s = trace.channels.at(n.channel_of({name, p.name}));
        in[p.name] = strict ? (t == 0 ? empty_interval() : s.at(t - 1)) : s.at(t);
      }
      State& st = states[name];
      if (c.kind() == ComponentKind::Process) trace.modes[name].push_back({st.at(kActiveKey).as_bool()});
      StepResult r = c.step(t, in, st);
      for (const auto& p : c.out_ports()) {
        auto it = r.outputs.find(p.name);
        if (it != r.outputs.end()) trace.channels.at(n.channel_of({name, p.name})).set(t, it->second);
      }
      for (auto w : r.warnings) trace.warnings.push_back({t, w, name});
      st = std::move(r.next_state);
    }
  }

  const auto violations = check_assumptions(n, trace);
  if (!violations.empty()) {
    trace.unconstrained_from = violations.front().tick;
    for (const auto& v : violations) trace.warnings.push_back({v.tick, WarningKind::AssumptionViolated, v.component + ": " + v.predicate});
    std::stable_sort(trace.warnings.begin(), trace.warnings.end(),
                     [](const auto& a, const auto& b) { return a.tick < b.tick; });
  }
  return trace;
}

}  // namespace procview
