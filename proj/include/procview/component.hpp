#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procview/message.hpp"
#include "procview/process.hpp"
#include "procview/stream.hpp"

namespace procview {

enum class Causality { Weak, Strict };

enum class ComponentKind { Process, Join, Split, Merge, Delay, Custom };

inline std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Process: return "process";
    case ComponentKind::Join: return "&";
    case ComponentKind::Split: return "@";
    case ComponentKind::Merge: return "+";
    case ComponentKind::Delay: return "delay";
    case ComponentKind::Custom: return "custom";
  }
  return "?";
}

enum class WarningKind {
  RestartWhileActive,
  RestartWhileRunning,
  RestartTooSoon,
  MergeCollision,
  AssumptionViolated,
};

inline std::string_view to_string(WarningKind k) {
  switch (k) {
    case WarningKind::RestartWhileActive: return "RestartWhileActive";
    case WarningKind::RestartWhileRunning: return "RestartWhileRunning";
    case WarningKind::RestartTooSoon: return "RestartTooSoon";
    case WarningKind::MergeCollision: return "MergeCollision";
    case WarningKind::AssumptionViolated: return "AssumptionViolated";
  }
  return "?";
}

/// Which formula of the process-component semantics dispatched a step.
enum class Rule {
  EndingStep,    // active, ending holds: stop fires, final calculation, deactivate
  ActiveStep,    // active, ending does not hold: ordinary calculation
  Idle,          // inactive, no start event
  Activation,    // inactive, start event: restart initialisation, activate
};

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::EndingStep: return "F1";
    case Rule::ActiveStep: return "F2";
    case Rule::Idle: return "F3";
    case Rule::Activation: return "F4";
  }
  return "?";
}

/// Named mutable values of a component. Process components use the keys
/// `active`, `buf:<input>` and `local:<name>`.
using State = std::map<std::string, Message>;

inline std::string buffer_key(const std::string& input) { return "buf:" + input; }
inline std::string local_key(const std::string& name) { return "local:" + name; }
inline constexpr const char* kActiveKey = "active";

struct StepResult {
  PortValues outputs;
  State next_state;
  std::vector<WarningKind> warnings;
  std::optional<Rule> rule;  // set by process components only
};

/// Per-tick environment assumption over a component's input ports.
struct Assumption {
  std::string label;  // e.g. `msg(1, x)`
  std::function<bool(const PortValues&)> holds;
};

inline Assumption msg_bound_assumption(std::size_t n, const std::string& port) {
  return {"msg(" + std::to_string(n) + ", " + port + ")",
          [n, port](const PortValues& in) {
            auto it = in.find(port);
            return it == in.end() || it->second.size() <= n;
          }};
}

/// The step function of a component. Implementations are immutable; all
/// evolving data lives in State.
class Behavior {
 public:
  virtual ~Behavior() = default;
  /// For strict components `inputs` holds the previous tick's intervals
  /// (all empty at tick 0).
  virtual StepResult step(Tick t, const PortValues& inputs, const State& state) const = 0;
};

/// Executable step machine with named ports. Copyable value; the behavior
/// is shared and immutable.
class Component {
 public:
  Component() = default;
  Component(std::string name, ComponentKind kind, std::vector<ChannelDecl> in_ports,
            std::vector<ChannelDecl> out_ports, Causality causality, State initial_state,
            std::shared_ptr<const Behavior> behavior, std::vector<Assumption> assumptions = {})
      : name_(std::move(name)),
        kind_(kind),
        in_ports_(std::move(in_ports)),
        out_ports_(std::move(out_ports)),
        causality_(causality),
        initial_state_(std::move(initial_state)),
        behavior_(std::move(behavior)),
        assumptions_(std::move(assumptions)) {}

  const std::string& name() const { return name_; }
  ComponentKind kind() const { return kind_; }
  const std::vector<ChannelDecl>& in_ports() const { return in_ports_; }
  const std::vector<ChannelDecl>& out_ports() const { return out_ports_; }
  Causality causality() const { return causality_; }
  const State& initial_state() const { return initial_state_; }
  const std::vector<Assumption>& assumptions() const { return assumptions_; }

  const ChannelDecl* in_port(const std::string& p) const { return find(in_ports_, p); }
  const ChannelDecl* out_port(const std::string& p) const { return find(out_ports_, p); }

  StepResult step(Tick t, const PortValues& inputs, const State& state) const {
    for (const auto& p : in_ports_)
      if (!inputs.count(p.name))
        throw Error(ErrorCode::UnknownChannel, name_ + ": no interval supplied for input " + p.name);
    return behavior_->step(t, inputs, state);
  }

  Component renamed(std::string name) const {
    Component c = *this;
    c.name_ = std::move(name);
    return c;
  }

 private:
  static const ChannelDecl* find(const std::vector<ChannelDecl>& ports, const std::string& p) {
    for (const auto& c : ports)
      if (c.name == p) return &c;
    return nullptr;
  }

  std::string name_;
  ComponentKind kind_ = ComponentKind::Custom;
  std::vector<ChannelDecl> in_ports_;
  std::vector<ChannelDecl> out_ports_;
  Causality causality_ = Causality::Weak;
  State initial_state_;
  std::shared_ptr<const Behavior> behavior_;
  std::vector<Assumption> assumptions_;
};

/// Adapts a lambda to a Behavior; handy for hand-built networks.
template <class F>
class FunctionBehavior final : public Behavior {
 public:
  explicit FunctionBehavior(F f) : f_(std::move(f)) {}
  StepResult step(Tick t, const PortValues& inputs, const State& state) const override {
    return f_(t, inputs, state);
  }

 private:
  F f_;
};

template <class F>
std::shared_ptr<const Behavior> make_behavior(F f) {
  return std::make_shared<const FunctionBehavior<F>>(std::move(f));
}

}  // namespace procview
