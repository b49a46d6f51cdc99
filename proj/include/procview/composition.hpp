#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "procview/component.hpp"
#include "procview/connectors.hpp"
#include "procview/process_component.hpp"

namespace procview {

struct ProcessExpr;
using ProcessExprPtr = std::shared_ptr<const ProcessExpr>;

namespace pexpr {
struct Elem {
  std::string name;
  std::shared_ptr<const ElementaryProcessSpec> spec;  // null until resolved
  ParamValues args;
};
struct Seq {
  ProcessExprPtr left, right;
};
struct Par {
  ProcessExprPtr left, right;
};
struct Alt {
  ProcessExprPtr left, right;
  ChooserPolicy chooser;
};
struct LoopAuto {
  ProcessExprPtr body;
  Tick delay = 1;
};
struct LoopNonAuto {
  ProcessExprPtr body;
  RestartPolicy policy;
};
}  // namespace pexpr

/// Composition tree of processes.
struct ProcessExpr {
  std::variant<pexpr::Elem, pexpr::Seq, pexpr::Par, pexpr::Alt, pexpr::LoopAuto, pexpr::LoopNonAuto> node;
};

inline ProcessExprPtr elem(std::shared_ptr<const ElementaryProcessSpec> spec, ParamValues args = {}) {
  std::string name = spec ? spec->name : std::string{};
  return std::make_shared<const ProcessExpr>(ProcessExpr{pexpr::Elem{std::move(name), std::move(spec), std::move(args)}});
}
inline ProcessExprPtr elem(const ElementaryProcessSpec& spec, ParamValues args = {}) {
  return elem(std::make_shared<const ElementaryProcessSpec>(spec), std::move(args));
}
inline ProcessExprPtr seq(ProcessExprPtr l, ProcessExprPtr r) {
  return std::make_shared<const ProcessExpr>(ProcessExpr{pexpr::Seq{std::move(l), std::move(r)}});
}
inline ProcessExprPtr par(ProcessExprPtr l, ProcessExprPtr r) {
  return std::make_shared<const ProcessExpr>(ProcessExpr{pexpr::Par{std::move(l), std::move(r)}});
}
inline ProcessExprPtr alt(ProcessExprPtr l, ProcessExprPtr r, ChooserPolicy chooser = RoundRobin{}) {
  return std::make_shared<const ProcessExpr>(ProcessExpr{pexpr::Alt{std::move(l), std::move(r), chooser}});
}
inline ProcessExprPtr loop_auto(ProcessExprPtr body, Tick delay) {
  if (delay < 1) throw Error(ErrorCode::ZenoRisk, "autonomous loop delay must be at least one tick");
  return std::make_shared<const ProcessExpr>(ProcessExpr{pexpr::LoopAuto{std::move(body), delay}});
}
inline ProcessExprPtr loop_manual(ProcessExprPtr body, RestartPolicy policy = {}) {
  if (policy.min_gap_ticks < 1) throw Error(ErrorCode::ZenoRisk, "min_gap_ticks must be at least one");
  return std::make_shared<const ProcessExpr>(ProcessExpr{pexpr::LoopNonAuto{std::move(body), policy}});
}

/// Structural equality; leaves compare by process name and arguments.
inline bool equal(const ProcessExprPtr& a, const ProcessExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, pexpr::Elem>) return x.name == y.name && x.args == y.args;
        else if constexpr (std::is_same_v<T, pexpr::Alt>)
          return x.chooser == y.chooser && equal(x.left, y.left) && equal(x.right, y.right);
        else if constexpr (std::is_same_v<T, pexpr::LoopAuto>) return x.delay == y.delay && equal(x.body, y.body);
        else if constexpr (std::is_same_v<T, pexpr::LoopNonAuto>)
          return x.policy == y.policy && equal(x.body, y.body);
        else return equal(x.left, y.left) && equal(x.right, y.right);
      },
      a->node);
}

/// Operator nesting depth; a leaf has depth 0.
inline std::size_t depth(const ProcessExpr& e) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) return 0;
        else if constexpr (std::is_same_v<T, pexpr::LoopAuto> || std::is_same_v<T, pexpr::LoopNonAuto>)
          return 1 + depth(*n.body);
        else return 1 + std::max(depth(*n.left), depth(*n.right));
      },
      e.node);
}

/// `P` or `P(d=3, k=true)`; used as the key for elementary WCET bounds.
inline std::string leaf_label(const pexpr::Elem& e) {
  if (e.args.empty()) return e.name;
  std::string out = e.name + "(";
  bool first = true;
  for (const auto& [k, v] : e.args) {
    if (!first) out += ", ";
    first = false;
    out += k + "=" + to_string(v, MessageStyle::Source);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Networks

struct PortRef {
  std::string component;
  std::string port;
  friend auto operator<=>(const PortRef&, const PortRef&) = default;
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

inline std::string to_string(const PortRef& p) { return p.component + "." + p.port; }

struct Channel {
  std::string name;
  MessageType type;
  std::optional<PortRef> driver;  // none for external inputs
  std::vector<PortRef> sinks;
  bool control = false;           // Event channel connecting entry/exit points
};

struct Wire {
  std::optional<PortRef> source;  // none when fed by the environment
  PortRef sink;
  std::string channel;
  bool control = false;
};

/// Environment obligation of a composite: every event on `start` must be
/// followed by an event on `done` before the next start.
struct NetworkAssumption {
  std::string label;
  std::string start_channel;
  std::string done_channel;
};

class NetworkBuilder;

/// A wired set of components. Channels are named; each is driven by one
/// output port or by the environment and may feed any number of inputs.
class Network {
 public:
  const std::vector<Component>& components() const { return components_; }
  const std::map<std::string, Channel>& channels() const { return channels_; }
  const std::optional<std::string>& entry() const { return entry_; }
  const std::optional<std::string>& exit() const { return exit_; }
  const std::vector<NetworkAssumption>& assumptions() const { return assumptions_; }

  const Component& component(const std::string& name) const {
    for (const auto& c : components_)
      if (c.name() == name) return c;
    throw Error(ErrorCode::UnknownComponent, name);
  }
  bool has_component(const std::string& name) const {
    return std::any_of(components_.begin(), components_.end(), [&](const auto& c) { return c.name() == name; });
  }

  const Channel& channel(const std::string& name) const {
    auto it = channels_.find(name);
    if (it == channels_.end()) throw Error(ErrorCode::UnknownChannel, name);
    return it->second;
  }

  const std::string& channel_of(const PortRef& p) const {
    auto it = port_channel_.find(p);
    if (it == port_channel_.end()) throw Error(ErrorCode::UnknownChannel, to_string(p));
    return it->second;
  }

  std::vector<std::string> external_inputs() const {
    std::vector<std::string> out;
    for (const auto& [n, c] : channels_)
      if (!c.driver) out.push_back(n);
    return out;
  }

  /// Driven channels nobody inside the network consumes, plus the exit.
  std::vector<std::string> external_outputs() const {
    std::vector<std::string> out;
    for (const auto& [n, c] : channels_)
      if (c.driver && (c.sinks.empty() || (exit_ && *exit_ == n))) out.push_back(n);
    return out;
  }

  /// Output channels of a component, in port order.
  std::vector<std::string> output_channels(const std::string& component_name) const {
    std::vector<std::string> out;
    for (const auto& p : component(component_name).out_ports())
      out.push_back(channel_of({component_name, p.name}));
    return out;
  }

  std::vector<Wire> wires() const {
    std::vector<Wire> out;
    for (const auto& c : components_)
      for (const auto& p : c.in_ports()) {
        PortRef sink{c.name(), p.name};
        const auto& ch = channels_.at(port_channel_.at(sink));
        out.push_back({ch.driver, sink, ch.name, ch.control});
      }
    return out;
  }

 private:
  friend class NetworkBuilder;
  std::vector<Component> components_;
  std::map<std::string, Channel> channels_;
  std::map<PortRef, std::string> port_channel_;
  std::optional<std::string> entry_, exit_;
  std::vector<NetworkAssumption> assumptions_;
};

class NetworkBuilder {
 public:
  NetworkBuilder& add(Component c) {
    for (const auto& existing : components_)
      if (existing.name() == c.name())
        throw Error(ErrorCode::NameCollision, "component " + c.name() + " added twice");
    components_.push_back(std::move(c));
    return *this;
  }

  /// Drives `to` (an input port) from the channel of `from` (an output port).
  NetworkBuilder& connect(const PortRef& from, const PortRef& to) {
    bind(to, from);
    return *this;
  }

  /// Feeds `to` from an environment channel named `channel`.
  NetworkBuilder& feed(const PortRef& to, const std::string& channel) {
    bind(to, channel);
    return *this;
  }

  /// Overrides the default `component.port` name of an output's channel.
  NetworkBuilder& name_output(const PortRef& from, const std::string& channel) {
    output_names_[from] = channel;
    return *this;
  }

  NetworkBuilder& entry(std::string channel) {
    entry_ = std::move(channel);
    return *this;
  }
  NetworkBuilder& exit(std::string channel) {
    exit_ = std::move(channel);
    return *this;
  }
  NetworkBuilder& assume(NetworkAssumption a) {
    assumptions_.push_back(std::move(a));
    return *this;
  }

  /// Channel name an output port will get.
  std::string output_channel(const PortRef& from) const {
    auto it = output_names_.find(from);
    return it == output_names_.end() ? to_string(from) : it->second;
  }

  /// Unbound inputs become environment channels named `component.port`.
  Network build() const {
    Network n;
    n.components_ = components_;
    for (const auto& c : components_)
      for (const auto& p : c.out_ports()) {
        PortRef ref{c.name(), p.name};
        const std::string name = output_channel(ref);
        if (n.channels_.count(name)) throw Error(ErrorCode::NameCollision, "channel " + name + " has two drivers");
        n.channels_[name] = Channel{name, p.type, ref, {}, p.type.kind == TypeKind::Event};
        n.port_channel_[ref] = name;
      }
    for (const auto& c : components_)
      for (const auto& p : c.in_ports()) {
        PortRef sink{c.name(), p.name};
        auto it = bindings_.find(sink);
        std::string name;
        if (it == bindings_.end()) {
          name = to_string(sink);
        } else if (const auto* from = std::get_if<PortRef>(&it->second)) {
          auto pc = n.port_channel_.find(*from);
          if (pc == n.port_channel_.end())
            throw Error(ErrorCode::InvalidNetwork, "no output port " + to_string(*from));
          name = pc->second;
        } else {
          name = std::get<std::string>(it->second);
          auto ch = n.channels_.find(name);
          if (ch != n.channels_.end() && ch->second.driver)
            throw Error(ErrorCode::NameCollision, "environment channel " + name + " is also driven internally");
        }
        auto [ch, inserted] = n.channels_.try_emplace(name, Channel{name, p.type, std::nullopt, {}, false});
        if (ch->second.type != p.type)
          throw Error(ErrorCode::TypeMismatch, "channel " + name + " carries " + to_string(ch->second.type) +
                                                   " but " + to_string(sink) + " expects " + to_string(p.type));
        ch->second.sinks.push_back(sink);
        n.port_channel_[sink] = name;
      }
    for (auto& [name, ch] : n.channels_) {
      if (ch.type.kind != TypeKind::Event) continue;
      // Control channels join entry/exit points; a channel is control if it
      // touches a start/stop port or a connector.
      auto is_control_port = [&](const PortRef& p) {
        const auto& comp = n.component(p.component);
        return comp.kind() != ComponentKind::Process || p.port == kStartPort || p.port == kStopPort;
      };
      ch.control = (ch.driver && is_control_port(*ch.driver)) ||
                   std::any_of(ch.sinks.begin(), ch.sinks.end(), is_control_port);
    }
    auto check_event = [&](const std::optional<std::string>& ch, const char* what) {
      if (!ch) return;
      auto it = n.channels_.find(*ch);
      if (it == n.channels_.end()) throw Error(ErrorCode::UnknownChannel, std::string(what) + " " + *ch);
      if (it->second.type.kind != TypeKind::Event)
        throw Error(ErrorCode::TypeMismatch, std::string(what) + " channel must be Event-typed");
    };
    check_event(entry_, "entry");
    check_event(exit_, "exit");
    n.entry_ = entry_;
    n.exit_ = exit_;
    n.assumptions_ = assumptions_;
    return n;
  }

 private:
  void bind(const PortRef& to, std::variant<PortRef, std::string> src) {
    if (!bindings_.emplace(to, std::move(src)).second)
      throw Error(ErrorCode::InvalidNetwork, "input " + to_string(to) + " is driven twice");
  }

  std::vector<Component> components_;
  std::map<PortRef, std::variant<PortRef, std::string>> bindings_;
  std::map<PortRef, std::string> output_names_;
  std::optional<std::string> entry_, exit_;
  std::vector<NetworkAssumption> assumptions_;
};

// ---------------------------------------------------------------------------
// Compilation

struct CompileOptions {
  /// Qualify data outputs that several instances declare with the instance
  /// name instead of failing with NameCollision.
  bool rename_duplicates = true;
};

/// Deterministic instance naming shared by compile() and the exporters:
/// leaves take their process name, suffixed `_k` when the name occurs more
/// than once; connectors are numbered `amp1`, `at1`, `plus1`, `delay1` in
/// pre-order.
class InstanceNames {
 public:
  explicit InstanceNames(const ProcessExpr& root) {
    count(root);
    walk(root);
  }

  const std::string& leaf(const ProcessExpr* e) const { return leaves_.at(e); }
  const std::string& connector(const ProcessExpr* e) const { return connectors_.at(e); }

 private:
  void count(const ProcessExpr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, pexpr::Elem>) ++occurrences_[n.name];
          else if constexpr (std::is_same_v<T, pexpr::LoopAuto> || std::is_same_v<T, pexpr::LoopNonAuto>)
            count(*n.body);
          else {
            count(*n.left);
            count(*n.right);
          }
        },
        e.node);
  }

  void walk(const ProcessExpr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, pexpr::Elem>) {
            leaves_[&e] = occurrences_[n.name] > 1 ? n.name + "_" + std::to_string(++seen_[n.name]) : n.name;
          } else if constexpr (std::is_same_v<T, pexpr::Seq>) {
            walk(*n.left);
            walk(*n.right);
          } else if constexpr (std::is_same_v<T, pexpr::Par>) {
            connectors_[&e] = "amp" + std::to_string(++amp_);
            walk(*n.left);
            walk(*n.right);
          } else if constexpr (std::is_same_v<T, pexpr::Alt>) {
            connectors_[&e] = std::to_string(++alt_);
            walk(*n.left);
            walk(*n.right);
          } else {
            connectors_[&e] = "delay" + std::to_string(++delay_);
            walk(*n.body);
          }
        },
        e.node);
  }

  std::map<std::string, int> occurrences_, seen_;
  std::map<const ProcessExpr*, std::string> leaves_, connectors_;
  int amp_ = 0, alt_ = 0, delay_ = 0;
};

namespace detail {

struct Fragment {
  std::vector<PortRef> entry_sinks;  // empty for autonomous loops
  std::optional<PortRef> exit;
};

class Compiler {
 public:
  Compiler(const ProcessExpr& root, CompileOptions opts) : names_(root), opts_(opts) {}

  Network run(const ProcessExpr& root) {
    Fragment f = build(root);
    wire_data();
    if (!f.entry_sinks.empty()) {
      const std::string entry = to_string(f.entry_sinks.front());
      for (const auto& s : f.entry_sinks) builder_.feed(s, entry);
      builder_.entry(entry);
    }
    if (f.exit) builder_.exit(builder_.output_channel(*f.exit));
    if (par_obligations_.empty()) return builder_.build();
    // Channel names are only known once the wiring is complete.
    const Network draft = builder_.build();
    for (const auto& [start, done] : par_obligations_) {
      const std::string done_ch = draft.channel_of(done);
      builder_.assume({"restart only after " + done_ch, draft.channel_of(start), done_ch});
    }
    return builder_.build();
  }

 private:
  Fragment require_entry(const ProcessExpr& e) {
    Fragment f = build(e);
    if (f.entry_sinks.empty())
      throw Error(ErrorCode::NoEntryPoint, "autonomous loop has no entry point and cannot be composed");
    return f;
  }

  Fragment build(const ProcessExpr& e) {
    return std::visit([&](const auto& n) { return build_node(e, n); }, e.node);
  }

  Fragment build_node(const ProcessExpr& e, const pexpr::Elem& n) {
    if (!n.spec) throw Error(ErrorCode::InvalidSpec, "process " + n.name + " is not resolved");
    const std::string inst = names_.leaf(&e);
    builder_.add(to_component(n.spec, n.args).renamed(inst));
    leaves_.push_back({inst, n.spec});
    return {{{inst, kStartPort}}, PortRef{inst, kStopPort}};
  }

  Fragment build_node(const ProcessExpr&, const pexpr::Seq& n) {
    Fragment p = require_entry(*n.left);
    Fragment q = require_entry(*n.right);
    for (const auto& s : q.entry_sinks) builder_.connect(*p.exit, s);
    return {p.entry_sinks, q.exit};
  }

  Fragment build_node(const ProcessExpr& e, const pexpr::Par& n) {
    const std::string amp = names_.connector(&e);
    builder_.add(amp_connector(amp));
    Fragment p = require_entry(*n.left);
    Fragment q = require_entry(*n.right);
    builder_.connect(*p.exit, {amp, "x"});
    builder_.connect(*q.exit, {amp, "y"});
    std::vector<PortRef> sinks = p.entry_sinks;
    sinks.insert(sinks.end(), q.entry_sinks.begin(), q.entry_sinks.end());
    par_obligations_.push_back({sinks.front(), PortRef{amp, "z"}});
    return {sinks, PortRef{amp, "z"}};
  }

  Fragment build_node(const ProcessExpr& e, const pexpr::Alt& n) {
    const std::string k = names_.connector(&e);
    const std::string at = "at" + k, plus = "plus" + k;
    builder_.add(at_connector(n.chooser, at));
    builder_.add(plus_connector(plus));
    Fragment p = require_entry(*n.left);
    Fragment q = require_entry(*n.right);
    for (const auto& s : p.entry_sinks) builder_.connect({at, "o_left"}, s);
    for (const auto& s : q.entry_sinks) builder_.connect({at, "o_right"}, s);
    builder_.connect(*p.exit, {plus, "x"});
    builder_.connect(*q.exit, {plus, "y"});
    return {{{at, "ent"}}, PortRef{plus, "z"}};
  }

  Fragment build_node(const ProcessExpr& e, const pexpr::LoopAuto& n) {
    const std::string d = names_.connector(&e);
    builder_.add(delay_component(n.delay, Autonomous{}, d));
    Fragment body = require_entry(*n.body);
    for (const auto& s : body.entry_sinks) builder_.connect({d, "entD"}, s);
    builder_.connect(*body.exit, {d, "extD"});
    return {{}, std::nullopt};
  }

  Fragment build_node(const ProcessExpr& e, const pexpr::LoopNonAuto& n) {
    const std::string d = names_.connector(&e);
    builder_.add(delay_component(1, NonAutonomous{n.policy}, d));
    Fragment body = require_entry(*n.body);
    for (const auto& s : body.entry_sinks) builder_.connect({d, "entD"}, s);
    builder_.connect(*body.exit, {d, "extD"});
    return {{{d, "entP"}}, body.exit};
  }

  // Data channels connect by name: an output feeds every input of the same
  // name elsewhere in the tree; unmatched inputs come from the environment.
  void wire_data() {
    std::map<std::string, std::vector<std::string>> producers;
    for (const auto& [inst, spec] : leaves_)
      for (const auto& c : spec->outputs()) producers[c.name].push_back(inst);

    for (const auto& [name, insts] : producers) {
      if (insts.size() == 1) {
        builder_.name_output({insts.front(), name}, name);
        continue;
      }
      if (!opts_.rename_duplicates)
        throw Error(ErrorCode::NameCollision, "output " + name + " is declared by " +
                                                  std::to_string(insts.size()) + " instances");
      for (const auto& inst : insts) builder_.name_output({inst, name}, inst + "." + name);
    }

    for (const auto& [inst, spec] : leaves_)
      for (const auto& c : spec->inputs()) {
        auto it = producers.find(c.name);
        if (it == producers.end()) {
          builder_.feed({inst, c.name}, c.name);
        } else if (it->second.size() == 1) {
          builder_.connect({it->second.front(), c.name}, {inst, c.name});
        } else {
          throw Error(ErrorCode::NameCollision, inst + " reads " + c.name + " but several instances produce it");
        }
      }
  }

  InstanceNames names_;
  CompileOptions opts_;
  NetworkBuilder builder_;
  std::vector<std::pair<std::string, std::shared_ptr<const ElementaryProcessSpec>>> leaves_;
  std::vector<std::pair<PortRef, PortRef>> par_obligations_;
};

}  // namespace detail

/// Wires the components realising a composition tree.
///
/// Sequential: the exit of the left part starts the right part directly.
/// Parallel: the entry fans out to both parts and `&` joins their exits.
/// Alternate: `@` starts one part and `+` merges the exits. Autonomous
/// loops close the body over a Delay timer and expose no entry or exit;
/// non-autonomous loops gate external starts through a Delay and exit on
/// the body's exit.
inline Network compile(const ProcessExpr& expr, CompileOptions opts = {}) {
  return detail::Compiler(expr, opts).run(expr);
}
inline Network compile(const ProcessExprPtr& expr, CompileOptions opts = {}) { return compile(*expr, opts); }

inline std::string entry_of(const ProcessExprPtr& expr) {
  const Network n = compile(expr);
  if (!n.entry()) throw Error(ErrorCode::NoEntryPoint, "autonomous loops have no entry point");
  return *n.entry();
}

inline std::string exit_of(const ProcessExprPtr& expr) {
  const Network n = compile(expr);
  if (!n.exit()) throw Error(ErrorCode::NoEntryPoint, "autonomous loops have no exit point");
  return *n.exit();
}

}  // namespace procview
