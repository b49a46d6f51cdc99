#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "procview/component.hpp"
#include "procview/process.hpp"

namespace procview {

/// Step function of the component representing an elementary process.
///
/// While active the ending predicate selects between the final and the
/// ordinary calculation. While inactive all outputs are silent, buffers
/// absorb the first message of each nonempty input interval, and a start
/// event applies the restart initialisation and activates the process for
/// the next tick. Outputs, buffers and locals not assigned by a calculation
/// are empty or unchanged respectively.
class ProcessBehavior final : public Behavior {
 public:
  ProcessBehavior(std::shared_ptr<const ElementaryProcessSpec> spec, ParamValues params)
      : spec_(std::move(spec)), params_(std::move(params)) {
    for (const auto& c : spec_->channels)
      (c.direction == Direction::Input ? inputs_ : outputs_).push_back(c.name);
  }

  StepResult step(Tick, const PortValues& inputs, const State& state) const override {
    StepResult r;
    r.next_state = state;

    std::map<std::string, Message> buffers;
    std::map<std::string, Message> locals;
    for (const auto& in : inputs_) buffers[in] = state.at(buffer_key(in));
    for (const auto& l : spec_->behavior.locals) locals[l.name] = state.at(local_key(l.name));
    const EvalScope scope{&params_, &locals, &buffers, &inputs};

    for (const auto& out : outputs_) r.outputs[out] = empty_interval();
    r.outputs[kStopPort] = empty_interval();

    const bool active = state.at(kActiveKey).as_bool();
    const bool start = !inputs.at(kStartPort).empty();

    if (active) {
      if (start) r.warnings.push_back(WarningKind::RestartWhileActive);
      const bool ending = eval(*spec_->behavior.pr_ending, scope).as_bool();
      apply(ending ? spec_->behavior.final_calc() : spec_->behavior.pr_calc, scope, r);
      if (ending) r.outputs[kStopPort] = event_interval();
      r.next_state[kActiveKey] = Message(!ending);
      r.rule = ending ? Rule::EndingStep : Rule::ActiveStep;
      return r;
    }

    if (start) {
      apply(spec_->behavior.init_process, scope, r);
      r.next_state[kActiveKey] = Message(true);
      r.rule = Rule::Activation;
    } else {
      r.rule = Rule::Idle;
    }
    for (const auto& in : inputs_) {
      const auto& i = inputs.at(in);
      if (!i.empty()) r.next_state[buffer_key(in)] = ft(i);
    }
    return r;
  }

  const ElementaryProcessSpec& spec() const { return *spec_; }
  const ParamValues& params() const { return params_; }

 private:
  // Right-hand sides read the pre-step scope, so assignments are simultaneous.
  void apply(const std::vector<Assignment>& assigns, const EvalScope& scope, StepResult& r) const {
    for (const auto& a : assigns) {
      switch (a.kind) {
        case TargetKind::Output: {
          std::vector<Message> msgs;
          msgs.reserve(a.elements.size());
          for (const auto& e : a.elements) msgs.push_back(eval(*e, scope));
          r.outputs[a.target] = TimeInterval(std::move(msgs));
          break;
        }
        case TargetKind::Buffer:
          r.next_state[buffer_key(a.target)] = eval(*a.elements.at(0), scope);
          break;
        case TargetKind::Local:
          r.next_state[local_key(a.target)] = eval(*a.elements.at(0), scope);
          break;
      }
    }
  }

  std::shared_ptr<const ElementaryProcessSpec> spec_;
  ParamValues params_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

/// Resolves instantiation arguments against the declared parameter defaults.
inline ParamValues bind_params(const ElementaryProcessSpec& spec, const ParamValues& args) {
  ParamValues values = default_params(spec);
  for (const auto& [name, value] : args) {
    const ParamDecl* decl = nullptr;
    for (const auto& p : spec.params)
      if (p.name == name) decl = &p;
    if (!decl) throw Error(ErrorCode::InvalidSpec, spec.name + " has no parameter " + name);
    if (!conforms(value, decl->type))
      throw Error(ErrorCode::TypeMismatch, spec.name + "." + name + " expects " + to_string(decl->type));
    values[name] = value;
  }
  return values;
}

/// Builds the component representing an elementary process: the process's
/// ports extended by `start` / `stop`, state = {active, buffers, locals}.
inline Component to_component(std::shared_ptr<const ElementaryProcessSpec> spec, const ParamValues& args = {}) {
  if (auto diags = validate(*spec); !diags.empty()) {
    std::ostringstream os;
    os << diags.size() << " diagnostic(s), first: " << diags.front();
    throw Error(ErrorCode::InvalidSpec, os.str());
  }
  ParamValues params = bind_params(*spec, args);

  std::vector<ChannelDecl> in_ports{{kStartPort, MessageType::event(), Direction::Input}};
  std::vector<ChannelDecl> out_ports{{kStopPort, MessageType::event(), Direction::Output}};
  State state{{kActiveKey, Message(false)}};
  for (const auto& c : spec->channels) {
    if (c.direction == Direction::Input) {
      in_ports.push_back(c);
      state[buffer_key(c.name)] = spec->buffer_for(c.name)->init;
    } else {
      out_ports.push_back(c);
    }
  }
  for (const auto& l : spec->behavior.locals) state[local_key(l.name)] = l.init;

  std::vector<Assumption> assumptions{msg_bound_assumption(1, kStartPort)};
  for (const auto& a : spec->behavior.assumptions) {
    if (const auto* mb = std::get_if<MsgBoundAssumption>(&a)) {
      assumptions.push_back(msg_bound_assumption(mb->bound, mb->channel));
      continue;
    }
    const ExprPtr pred = std::get<PredicateAssumption>(a).predicate;
    std::set<std::string> ft_reads, present_reads;
    collect_channel_reads(*pred, ft_reads, present_reads);
    assumptions.push_back({to_source(pred), [pred, ft_reads, params](const PortValues& in) {
                             for (const auto& ch : ft_reads) {
                               auto it = in.find(ch);
                               if (it == in.end() || it->second.empty()) return true;
                             }
                             return eval(*pred, EvalScope{&params, nullptr, nullptr, &in}).as_bool();
                           }});
  }

  auto behavior = std::make_shared<const ProcessBehavior>(spec, params);
  return Component(spec->name, ComponentKind::Process, std::move(in_ports), std::move(out_ports),
                   Causality::Weak, std::move(state), std::move(behavior), std::move(assumptions));
}

inline Component to_component(const ElementaryProcessSpec& spec, const ParamValues& args = {}) {
  return to_component(std::make_shared<const ElementaryProcessSpec>(spec), args);
}

/// Entry / exit port of an elementary process.
inline std::string entry_of(const ElementaryProcessSpec&) { return kStartPort; }
inline std::string exit_of(const ElementaryProcessSpec&) { return kStopPort; }

/// Evaluates the declared WCET expression with the bound parameters.
inline std::optional<Tick> declared_wcet(const ElementaryProcessSpec& spec, const ParamValues& args = {}) {
  if (!spec.declared_wcet) return std::nullopt;
  const ParamValues params = bind_params(spec, args);
  const auto v = eval(**spec.declared_wcet, EvalScope{&params, nullptr, nullptr, nullptr}).as_int();
  if (v < 0) throw Error(ErrorCode::InvalidBound, spec.name + " declares a negative wcet");
  return static_cast<Tick>(v);
}

}  // namespace procview
