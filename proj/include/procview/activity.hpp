#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "procview/simulation.hpp"

namespace procview {

/// Output streams Out(C) of a component as seen in a trace: for process
/// components this includes the exit channel.
struct OutputSet {
  std::string component;
  std::vector<std::pair<std::string, std::string>> ports;  // (port, channel)

  const std::string* channel_for(const std::string& x) const {
    for (const auto& [port, channel] : ports)
      if (port == x || channel == x) return &channel;
    return nullptr;
  }
};

inline OutputSet outputs_of(const Network& n, const std::string& component) {
  OutputSet out{component, {}};
  for (const auto& p : n.component(component).out_ports())
    out.ports.emplace_back(p.name, n.channel_of({component, p.name}));
  return out;
}

namespace detail {
inline bool nonempty(const Trace& tr, const std::string& channel, Tick t) {
  if (t >= tr.horizon) throw Error(ErrorCode::HorizonExceeded, "tick " + std::to_string(t));
  return !tr.stream(channel).at(t).empty();
}

inline std::size_t count_active_outputs(const Trace& tr, const OutputSet& c, Tick t) {
  std::size_t k = 0;
  for (const auto& [port, channel] : c.ports) k += nonempty(tr, channel, t) ? 1 : 0;
  return k;
}

inline const std::string& require_output(const OutputSet& c, const std::string& x) {
  const std::string* ch = c.channel_for(x);
  if (!ch) throw Error(ErrorCode::UnknownStream, x + " is not an output of " + c.component);
  return *ch;
}
}  // namespace detail

/// C is active on output x at t: x↓t is nonempty.
inline bool active_on(const Trace& tr, const OutputSet& c, Tick t, const std::string& x) {
  return detail::nonempty(tr, detail::require_output(c, x), t);
}

/// x↓t is nonempty and every other output of C is empty at t.
inline bool active_only_on(const Trace& tr, const OutputSet& c, Tick t, const std::string& x) {
  const std::string& target = detail::require_output(c, x);
  if (!detail::nonempty(tr, target, t)) return false;
  for (const auto& [port, channel] : c.ports)
    if (channel != target && detail::nonempty(tr, channel, t)) return false;
  return true;
}

/// At least one output of C is nonempty at t.
inline bool active(const Trace& tr, const OutputSet& c, Tick t) {
  for (const auto& [port, channel] : c.ports)
    if (detail::nonempty(tr, channel, t)) return true;
  return false;
}

enum class BoundKind { Lower, Upper, Exact };

/// Restricted activity: compares the number k of nonempty outputs at t
/// with rb (k ≥ rb, k ≤ rb, k = rb).
inline bool active_bounded(const Trace& tr, const OutputSet& c, Tick t, BoundKind kind, std::size_t rb) {
  if (rb > c.ports.size())
    throw Error(ErrorCode::InvalidBound, "rb=" + std::to_string(rb) + " exceeds the " +
                                             std::to_string(c.ports.size()) + " outputs of " + c.component);
  const std::size_t k = detail::count_active_outputs(tr, c, t);
  switch (kind) {
    case BoundKind::Lower: return k >= rb;
    case BoundKind::Upper: return k <= rb;
    case BoundKind::Exact: return k == rb;
  }
  return false;
}

enum class SetKind { Any, Lower, Upper, Exact };

/// How members of a component set are counted: by "some output stream is
/// nonempty" or by the component-level activity predicate. The two coincide
/// for components with at least one output; both are kept so that the
/// agreement can be checked rather than assumed.
enum class SetCounting { StreamExistential, ComponentActive };

inline bool active_set(const Trace& tr, std::span<const OutputSet> set, Tick t, SetKind kind, std::size_t rb,
                       SetCounting counting = SetCounting::StreamExistential) {
  if (kind != SetKind::Any && rb > set.size())
    throw Error(ErrorCode::InvalidBound, "rb=" + std::to_string(rb) + " exceeds set size " + std::to_string(set.size()));
  std::size_t k = 0;
  for (const auto& c : set) {
    bool counted = false;
    if (counting == SetCounting::StreamExistential) {
      for (const auto& [port, channel] : c.ports) counted = counted || active_on(tr, c, t, port);
    } else {
      counted = active(tr, c, t);
    }
    k += counted ? 1 : 0;
  }
  switch (kind) {
    case SetKind::Any: return k >= 1;
    case SetKind::Lower: return k >= rb;
    case SetKind::Upper: return k <= rb;
    case SetKind::Exact: return k == rb;
  }
  return false;
}

struct DisjointnessReport {
  bool exactly_one_always = false;  // ∀t: exactly one output nonempty
  bool disjoint = false;            // outputs pairwise never simultaneous
  bool implication_holds = true;    // exactly_one_always ⇒ disjoint
};

/// Checks ∀t exact-1 activity and, independently, stream disjointness of
/// the outputs of C.
inline DisjointnessReport disjoint_outputs_check(const Trace& tr, const OutputSet& c) {
  DisjointnessReport r;
  r.exactly_one_always = !c.ports.empty();
  for (Tick t = 0; t < tr.horizon && r.exactly_one_always; ++t)
    r.exactly_one_always = active_bounded(tr, c, t, BoundKind::Exact, 1);
  std::vector<const TimedStream*> streams;
  for (const auto& [port, channel] : c.ports) streams.push_back(&tr.stream(channel));
  r.disjoint = streams.empty() || disjoint(std::span<const TimedStream* const>(streams));
  r.implication_holds = !r.exactly_one_always || r.disjoint;
  return r;
}

// ---------------------------------------------------------------------------
// Queries

enum class QueryKind {
  OnStream,
  OnlyOnStream,
  Any,
  Lower,
  Upper,
  Exact,
  SetAny,
  SetLower,
  SetUpper,
  SetExact,
  SetLowerComp,
  SetUpperComp,
  SetExactComp,
  DisjointOutputs,
};

/// One activity question about a trace. `tick` empty means "for every tick".
struct ActivityQuery {
  QueryKind kind = QueryKind::Any;
  std::vector<std::string> subject;  // one component, or the set members
  std::optional<Tick> tick;
  std::string stream;                // OnStream / OnlyOnStream
  std::size_t rb = 0;
};

inline bool is_set_query(QueryKind k) {
  return k == QueryKind::SetAny || k == QueryKind::SetLower || k == QueryKind::SetUpper ||
         k == QueryKind::SetExact || k == QueryKind::SetLowerComp || k == QueryKind::SetUpperComp ||
         k == QueryKind::SetExactComp;
}

struct QueryResult {
  bool holds = false;               // at the tick, or at every tick
  std::vector<Tick> holding_ticks;  // when evaluated over all ticks
  std::optional<DisjointnessReport> disjointness;
};

inline bool evaluate_at(const ActivityQuery& q, const Trace& tr, std::span<const OutputSet> subj, Tick t) {
  const OutputSet& c = subj.front();
  switch (q.kind) {
    case QueryKind::OnStream: return active_on(tr, c, t, q.stream);
    case QueryKind::OnlyOnStream: return active_only_on(tr, c, t, q.stream);
    case QueryKind::Any: return active(tr, c, t);
    case QueryKind::Lower: return active_bounded(tr, c, t, BoundKind::Lower, q.rb);
    case QueryKind::Upper: return active_bounded(tr, c, t, BoundKind::Upper, q.rb);
    case QueryKind::Exact: return active_bounded(tr, c, t, BoundKind::Exact, q.rb);
    case QueryKind::SetAny: return active_set(tr, subj, t, SetKind::Any, 0);
    case QueryKind::SetLower: return active_set(tr, subj, t, SetKind::Lower, q.rb);
    case QueryKind::SetUpper: return active_set(tr, subj, t, SetKind::Upper, q.rb);
    case QueryKind::SetExact: return active_set(tr, subj, t, SetKind::Exact, q.rb);
    case QueryKind::SetLowerComp: return active_set(tr, subj, t, SetKind::Lower, q.rb, SetCounting::ComponentActive);
    case QueryKind::SetUpperComp: return active_set(tr, subj, t, SetKind::Upper, q.rb, SetCounting::ComponentActive);
    case QueryKind::SetExactComp: return active_set(tr, subj, t, SetKind::Exact, q.rb, SetCounting::ComponentActive);
    case QueryKind::DisjointOutputs: break;
  }
  throw Error(ErrorCode::InvalidBound, "query has no per-tick form");
}

inline QueryResult evaluate(const ActivityQuery& q, const Trace& tr, const Network& n) {
  if (q.subject.empty()) throw Error(ErrorCode::UnknownComponent, "query names no component");
  if (!is_set_query(q.kind) && q.subject.size() != 1)
    throw Error(ErrorCode::UnknownComponent, "component query over a set");
  std::vector<OutputSet> subj;
  for (const auto& c : q.subject) subj.push_back(outputs_of(n, c));

  QueryResult r;
  if (q.kind == QueryKind::DisjointOutputs) {
    r.disjointness = disjoint_outputs_check(tr, subj.front());
    r.holds = r.disjointness->exactly_one_always;
    return r;
  }
  if (q.tick) {
    r.holds = evaluate_at(q, tr, subj, *q.tick);
    if (r.holds) r.holding_ticks.push_back(*q.tick);
    return r;
  }
  r.holds = true;
  for (Tick t = 0; t < tr.horizon; ++t) {
    if (evaluate_at(q, tr, subj, t)) r.holding_ticks.push_back(t);
    else r.holds = false;
  }
  return r;
}

}  // namespace procview
