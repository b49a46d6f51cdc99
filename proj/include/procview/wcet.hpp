#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "procview/simulation.hpp"

namespace procview {

enum class ConnectorCostMode { Zero, Measured };

/// Latency contributed by each connector kind, in ticks.
struct ConnectorCosts {
  Tick join = 0;   // &
  Tick split = 0;  // @
  Tick merge = 0;  // +
  Tick delay = 0;  // non-autonomous loop gate, external start to body start
  friend bool operator==(const ConnectorCosts&, const ConnectorCosts&) = default;
};

namespace detail {
// Input-event at tick 0 on every listed port, latency to the first event on `out`.
inline Tick connector_latency(const Component& c, std::initializer_list<const char*> fire, const char* out) {
  NetworkBuilder b;
  b.add(c);
  const Network n = b.build();
  constexpr std::size_t horizon = 8;
  EnvInputs env;
  for (const auto& p : c.in_ports()) {
    const bool hit = std::find_if(fire.begin(), fire.end(), [&](const char* f) { return p.name == f; }) != fire.end();
    env[n.channel_of({c.name(), p.name})] = hit ? event_stream(horizon, {0}) : TimedStream(MessageType::event(), horizon);
  }
  const Trace tr = run(n, env, horizon);
  const auto ticks = tr.event_ticks(n.channel_of({c.name(), out}));
  if (ticks.empty()) throw Error(ErrorCode::MeasurementInconclusive, c.name() + " never produced " + out);
  return ticks.front();
}
}  // namespace detail

/// Measures each connector in isolation by simulation.
inline ConnectorCosts measured_connector_costs() {
  ConnectorCosts c;
  c.join = detail::connector_latency(amp_connector(), {"x", "y"}, "z");
  c.split = detail::connector_latency(at_connector(FixedChoice{Branch::Left}), {"ent"}, "o_left");
  c.merge = detail::connector_latency(plus_connector(), {"x"}, "z");
  c.delay = detail::connector_latency(delay_component(1, NonAutonomous{}), {"entP"}, "entD");
  return c;
}

/// Elementary bounds keyed by leaf label (`P`, `P(d=3)`).
using ElementaryBounds = std::map<std::string, Tick>;

struct WcetNode {
  std::string rule;   // elem, seq, par, alt, loop
  std::string label;  // leaf label or operator spelling
  Tick value = 0;
  std::vector<WcetNode> children;
};

struct WcetReport {
  ProcessExprPtr expr;
  Tick bound = 0;
  WcetNode derivation;
  ConnectorCostMode connector_cost_mode = ConnectorCostMode::Zero;
  ConnectorCosts costs;
};

namespace detail {
inline WcetNode wcet_fold(const ProcessExpr& e, const ElementaryBounds& bounds, const ConnectorCosts& k) {
  return std::visit(
      [&](const auto& n) -> WcetNode {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) {
          const std::string label = leaf_label(n);
          auto it = bounds.find(label);
          if (it == bounds.end()) throw Error(ErrorCode::MissingBound, "no WCET bound for " + label);
          return {"elem", label, it->second, {}};
        } else if constexpr (std::is_same_v<T, pexpr::Seq>) {
          WcetNode l = wcet_fold(*n.left, bounds, k), r = wcet_fold(*n.right, bounds, k);
          const Tick v = l.value + r.value;
          return {"seq", ";", v, {std::move(l), std::move(r)}};
        } else if constexpr (std::is_same_v<T, pexpr::Par>) {
          WcetNode l = wcet_fold(*n.left, bounds, k), r = wcet_fold(*n.right, bounds, k);
          const Tick v = std::max(l.value, r.value) + k.join;
          return {"par", "||", v, {std::move(l), std::move(r)}};
        } else if constexpr (std::is_same_v<T, pexpr::Alt>) {
          WcetNode l = wcet_fold(*n.left, bounds, k), r = wcet_fold(*n.right, bounds, k);
          const Tick v = std::max(l.value, r.value) + k.split + k.merge;
          return {"alt", "(+)", v, {std::move(l), std::move(r)}};
        } else if constexpr (std::is_same_v<T, pexpr::LoopAuto>) {
          WcetNode b = wcet_fold(*n.body, bounds, k);
          const Tick v = b.value;
          return {"loop", "loop(auto)", v, {std::move(b)}};
        } else {
          WcetNode b = wcet_fold(*n.body, bounds, k);
          const Tick v = b.value + k.delay;
          return {"loop", "loop(manual)", v, {std::move(b)}};
        }
      },
      e.node);
}
}  // namespace detail

/// Compositional WCET: sums over `;`, maximum plus join cost over `||`,
/// maximum plus split and merge cost over `(+)`, and the body's bound for
/// loops. In zero mode every connector costs nothing.
inline WcetReport wcet(const ProcessExprPtr& expr, const ElementaryBounds& bounds,
                       ConnectorCostMode mode = ConnectorCostMode::Zero) {
  WcetReport r;
  r.expr = expr;
  r.connector_cost_mode = mode;
  if (mode == ConnectorCostMode::Measured) r.costs = measured_connector_costs();
  r.derivation = detail::wcet_fold(*expr, bounds, r.costs);
  r.bound = r.derivation.value;
  return r;
}

namespace detail {
template <class F>
void for_each_leaf(const ProcessExpr& e, F&& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) f(n);
        else if constexpr (std::is_same_v<T, pexpr::LoopAuto> || std::is_same_v<T, pexpr::LoopNonAuto>)
          for_each_leaf(*n.body, f);
        else {
          for_each_leaf(*n.left, f);
          for_each_leaf(*n.right, f);
        }
      },
      e.node);
}
}  // namespace detail

/// Bounds from each leaf's declared `wcet` clause; leaves without one are omitted.
inline ElementaryBounds declared_bounds(const ProcessExprPtr& expr) {
  ElementaryBounds out;
  detail::for_each_leaf(*expr, [&](const pexpr::Elem& leaf) {
    if (!leaf.spec) return;
    if (auto w = declared_wcet(*leaf.spec, leaf.args)) out[leaf_label(leaf)] = *w;
  });
  return out;
}

/// Maximum single-activation latency (exit tick minus entry tick) over the
/// given data environments. Each environment is completed with silence and
/// an entry event at tick 0; an empty span measures the all-silent input.
inline Tick measure_wcet(const ProcessExprPtr& expr, std::span<const EnvInputs> data_envs, std::size_t horizon,
                         CompileOptions opts = {}) {
  const Network n = compile(expr, opts);
  if (!n.entry() || !n.exit()) throw Error(ErrorCode::NoEntryPoint, "measurement needs an entry and an exit");
  const std::vector<EnvInputs> fallback{EnvInputs{}};
  if (data_envs.empty()) data_envs = fallback;

  Tick worst = 0;
  for (const auto& data : data_envs) {
    EnvInputs given = data;
    if (given.count(*n.entry())) throw Error(ErrorCode::InvalidNetwork, "data environment drives the entry channel");
    given[*n.entry()] = event_stream(horizon, {0});
    const Trace tr = run(n, complete_env(n, horizon, std::move(given)), horizon);
    const auto exits = tr.event_ticks(*n.exit());
    if (exits.empty())
      throw Error(ErrorCode::MeasurementInconclusive, "no exit within " + std::to_string(horizon) + " ticks");
    worst = std::max(worst, exits.front());
  }
  return worst;
}

/// Bounds measured by simulating each distinct leaf on its own.
inline ElementaryBounds measured_bounds(const ProcessExprPtr& expr, std::size_t horizon,
                                        std::span<const EnvInputs> data_envs = {}) {
  ElementaryBounds out;
  detail::for_each_leaf(*expr, [&](const pexpr::Elem& leaf) {
    const std::string label = leaf_label(leaf);
    if (out.count(label)) return;
    auto single = std::make_shared<const ProcessExpr>(ProcessExpr{leaf});
    out[label] = measure_wcet(single, data_envs, horizon);
  });
  return out;
}

}  // namespace procview
