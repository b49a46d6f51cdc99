#pragma once

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "procview/composition.hpp"

namespace procview::io {

/// What a net node stands for in the process expression.
struct Annotation {
  std::string kind;  // process, join, fork, choice, merge, delay, loop, entry, exit, internal
  std::string ref;   // instance or connector name; empty for internal places
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Place {
  std::string id;
  std::string label;
  unsigned initial_tokens = 0;
  Annotation annotation;
};

struct Transition {
  std::string id;
  std::string label;
  Annotation annotation;
};

struct Arc {
  std::string id;
  std::string source;
  std::string target;
};

/// Place/transition net for the control view of a process expression.
struct PetriNetModel {
  std::string name;
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
  std::optional<std::string> entry_place;
  std::optional<std::string> exit_place;

  const Place* place(const std::string& id) const {
    for (const auto& p : places)
      if (p.id == id) return &p;
    return nullptr;
  }
  const Transition* transition(const std::string& id) const {
    for (const auto& t : transitions)
      if (t.id == id) return &t;
    return nullptr;
  }
};

namespace detail {

class NetBuilder {
 public:
  NetBuilder(const ProcessExpr& root, PetriNetModel& net) : names_(root), net_(net) {}

  std::string place(Annotation a = {"internal", ""}, std::string label = {}) {
    std::string id = "p" + std::to_string(net_.places.size());
    if (label.empty()) label = a.ref.empty() ? id : a.ref;
    net_.places.push_back({id, std::move(label), 0, std::move(a)});
    return id;
  }

  void transition(const std::string& id, const std::string& label, Annotation a, const std::vector<std::string>& pre,
                  const std::vector<std::string>& post) {
    // Prefixed so that process names cannot collide with place or arc ids.
    const std::string tid = "t_" + id;
    net_.transitions.push_back({tid, label, std::move(a)});
    for (const auto& p : pre) arc(p, tid);
    for (const auto& p : post) arc(tid, p);
  }

  void arc(const std::string& from, const std::string& to) {
    net_.arcs.push_back({"a" + std::to_string(net_.arcs.size()), from, to});
  }

  // Builds `e` between the given pre- and post-place.
  void build(const ProcessExpr& e, const std::string& pre, const std::string& post) {
    std::visit([&](const auto& n) { build_node(e, n, pre, post); }, e.node);
  }

  // Builds an autonomous loop at the root: a marked self-start place.
  void build_root_loop(const ProcessExpr& e, const pexpr::LoopAuto& n) {
    const std::string d = names_.connector(&e);
    const std::string start = place({"loop", d}, d + ".start");
    net_.places.back().initial_tokens = 1;
    const std::string done = place({"loop", d}, d + ".done");
    require_entry(*n.body);
    build(*n.body, start, done);
    transition(d, "Delay", {"delay", d}, {done}, {start});
  }

 private:
  void require_entry(const ProcessExpr& e) {
    if (std::holds_alternative<pexpr::LoopAuto>(e.node))
      throw Error(ErrorCode::NoEntryPoint, "autonomous loop has no entry point and cannot be composed");
  }

  void build_node(const ProcessExpr& e, const pexpr::Elem&, const std::string& pre, const std::string& post) {
    const std::string& inst = names_.leaf(&e);
    transition(inst, inst, {"process", inst}, {pre}, {post});
  }

  void build_node(const ProcessExpr&, const pexpr::Seq& n, const std::string& pre, const std::string& post) {
    require_entry(*n.left);
    require_entry(*n.right);
    const std::string mid = place();
    build(*n.left, pre, mid);
    build(*n.right, mid, post);
  }

  void build_node(const ProcessExpr& e, const pexpr::Par& n, const std::string& pre, const std::string& post) {
    require_entry(*n.left);
    require_entry(*n.right);
    const std::string amp = names_.connector(&e);
    const std::string l0 = place(), l1 = place(), r0 = place(), r1 = place();
    transition(amp + "_fork", "fork", {"fork", amp}, {pre}, {l0, r0});
    build(*n.left, l0, l1);
    build(*n.right, r0, r1);
    transition(amp, "&", {"join", amp}, {l1, r1}, {post});
  }

  // Free choice: both branches consume from the @-place and produce into
  // the +-place.
  void build_node(const ProcessExpr& e, const pexpr::Alt& n, const std::string& pre, const std::string& post) {
    require_entry(*n.left);
    require_entry(*n.right);
    const std::string k = names_.connector(&e);
    annotate(pre, {"choice", "at" + k});
    annotate(post, {"merge", "plus" + k});
    build(*n.left, pre, post);
    build(*n.right, pre, post);
  }

  void build_node(const ProcessExpr& e, const pexpr::LoopAuto&, const std::string&, const std::string&) {
    (void)e;
    throw Error(ErrorCode::NoEntryPoint, "autonomous loop has no entry point and cannot be composed");
  }

  // The Delay gate forwards the start into the body. Without restarts an
  // idle place serialises activations; the body's exit returns the token.
  void build_node(const ProcessExpr& e, const pexpr::LoopNonAuto& n, const std::string& pre,
                  const std::string& post) {
    require_entry(*n.body);
    const std::string d = names_.connector(&e);
    const std::string b0 = place(), b1 = place();
    if (n.policy.allow_restart_while_running) {
      transition(d, "Delay", {"delay", d}, {pre}, {b0});
      build(*n.body, b0, b1);
      transition(d + "_exit", "exit", {"loop", d}, {b1}, {post});
      return;
    }
    const std::string idle = place({"loop", d}, d + ".idle");
    net_.places.back().initial_tokens = 1;
    transition(d, "Delay", {"delay", d}, {pre, idle}, {b0});
    build(*n.body, b0, b1);
    transition(d + "_exit", "exit", {"loop", d}, {b1}, {post, idle});
  }

  void annotate(const std::string& place_id, Annotation a) {
    for (auto& p : net_.places)
      if (p.id == place_id && p.annotation.kind == "internal") {
        p.label = a.ref;
        p.annotation = std::move(a);
      }
  }

  InstanceNames names_;
  PetriNetModel& net_;
};

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Control-flow skeleton of a process expression; data channels are dropped.
/// Each process is one transition between its entry and exit place,
/// sequential steps share a place, `||` forks and joins, `(+)` is a free
/// choice between branches sharing their pre- and post-place, and loops
/// cycle through a Delay transition. The entry place holds one token.
inline PetriNetModel to_petri_net(const ProcessExprPtr& expr, const std::string& name = "net") {
  PetriNetModel net;
  net.name = name;
  detail::NetBuilder b(*expr, net);
  if (const auto* loop = std::get_if<pexpr::LoopAuto>(&expr->node)) {
    b.build_root_loop(*expr, *loop);
    return net;
  }
  const std::string entry = b.place({"entry", ""}, "entry");
  const std::string exit = b.place({"exit", ""}, "exit");
  net.places.front().initial_tokens = 1;
  b.build(*expr, entry, exit);
  net.entry_place = entry;
  net.exit_place = exit;
  return net;
}

/// PNML Core (Place/Transition net) document. Node annotations are carried
/// in `toolspecific` elements.
inline std::string to_pnml(const PetriNetModel& net) {
  using detail::xml_escape;
  auto tool = [](const Annotation& a) {
    return "<toolspecific tool=\"procview\" version=\"1\"><source kind=\"" + xml_escape(a.kind) + "\" ref=\"" +
           xml_escape(a.ref) + "\"/></toolspecific>";
  };
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n";
  out += "  <net id=\"" + xml_escape(net.name) + "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n";
  out += "    <page id=\"page0\">\n";
  for (const auto& p : net.places) {
    out += "      <place id=\"" + xml_escape(p.id) + "\"><name><text>" + xml_escape(p.label) + "</text></name>";
    if (p.initial_tokens)
      out += "<initialMarking><text>" + std::to_string(p.initial_tokens) + "</text></initialMarking>";
    out += tool(p.annotation) + "</place>\n";
  }
  for (const auto& t : net.transitions)
    out += "      <transition id=\"" + xml_escape(t.id) + "\"><name><text>" + xml_escape(t.label) +
           "</text></name>" + tool(t.annotation) + "</transition>\n";
  for (const auto& a : net.arcs)
    out += "      <arc id=\"" + xml_escape(a.id) + "\" source=\"" + xml_escape(a.source) + "\" target=\"" +
           xml_escape(a.target) + "\"/>\n";
  out += "    </page>\n  </net>\n</pnml>\n";
  return out;
}

/// Node ids are unique and every arc links a place with a transition.
inline bool is_bipartite(const PetriNetModel& net) {
  std::set<std::string> places, transitions;
  for (const auto& p : net.places)
    if (!places.insert(p.id).second) return false;
  for (const auto& t : net.transitions)
    if (places.count(t.id) || !transitions.insert(t.id).second) return false;
  for (const auto& a : net.arcs) {
    const bool pt = places.count(a.source) && transitions.count(a.target);
    const bool tp = transitions.count(a.source) && places.count(a.target);
    if (!pt && !tp) return false;
  }
  return true;
}

using Marking = std::map<std::string, unsigned>;

inline Marking initial_marking(const PetriNetModel& net) {
  Marking m;
  for (const auto& p : net.places)
    if (p.initial_tokens) m[p.id] = p.initial_tokens;
  return m;
}

struct ReachabilityResult {
  std::size_t states = 0;
  std::set<std::string> fired;  // transitions enabled in some reachable marking
  std::vector<Marking> dead;    // reachable markings with nothing enabled
  bool truncated = false;
};

/// Exhaustive exploration of the reachability graph, stopping after
/// `max_states` distinct markings.
inline ReachabilityResult explore(const PetriNetModel& net, std::size_t max_states = 100000) {
  std::map<std::string, std::vector<std::string>> pre, post;
  for (const auto& a : net.arcs) {
    if (net.transition(a.target)) pre[a.target].push_back(a.source);
    else post[a.source].push_back(a.target);
  }
  ReachabilityResult r;
  std::set<Marking> seen{initial_marking(net)};
  std::queue<Marking> work;
  work.push(*seen.begin());
  while (!work.empty()) {
    const Marking m = work.front();
    work.pop();
    bool any = false;
    for (const auto& t : net.transitions) {
      Marking next = m;
      bool enabled = true;
      for (const auto& p : pre[t.id]) {
        auto it = next.find(p);
        if (it == next.end() || it->second == 0) {
          enabled = false;
          break;
        }
        if (--it->second == 0) next.erase(it);
      }
      if (!enabled) continue;
      any = true;
      r.fired.insert(t.id);
      for (const auto& p : post[t.id]) ++next[p];
      if (seen.size() >= max_states) {
        r.truncated = true;
        continue;
      }
      if (seen.insert(next).second) work.push(std::move(next));
    }
    if (!any) r.dead.push_back(m);
  }
  r.states = seen.size();
  return r;
}

/// Instance names of process transitions that can fire from the initial marking.
inline std::set<std::string> reachable_processes(const PetriNetModel& net) {
  const auto r = explore(net);
  std::set<std::string> out;
  for (const auto& t : net.transitions)
    if (t.annotation.kind == "process" && r.fired.count(t.id)) out.insert(t.annotation.ref);
  return out;
}

}  // namespace procview::io
