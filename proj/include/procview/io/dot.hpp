#pragma once

#include <set>
#include <string>

#include "procview/composition.hpp"

namespace procview::io {

namespace detail {
// Labels may carry DOT escapes such as `\n`, so backslashes pass through.
inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string connector_glyph(ComponentKind k) {
  switch (k) {
    case ComponentKind::Join: return "&";
    case ComponentKind::Split: return "@";
    case ComponentKind::Merge: return "+";
    case ComponentKind::Delay: return "Delay";
    default: return "";
  }
}
}  // namespace detail

/// Graphviz rendering of a network. Components are nodes in insertion order,
/// internal wires are edges in sink order. Connectors, control edges and
/// the components owning the entry and exit channel are drawn in orange.
/// Environment-fed inputs are listed on their node instead of as edges.
inline std::string to_dot(const Network& n, const std::string& graph_name = "network") {
  using detail::dot_quote;
  std::string out = "digraph " + dot_quote(graph_name) + " {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=box, fontname=\"Helvetica\"];\n";
  out += "  edge [fontname=\"Helvetica\", fontsize=10];\n";

  std::set<std::string> entry_owners, exit_owners;
  if (n.entry())
    for (const auto& s : n.channel(*n.entry()).sinks) entry_owners.insert(s.component);
  if (n.exit())
    if (const auto& d = n.channel(*n.exit()).driver) exit_owners.insert(d->component);

  for (const auto& c : n.components()) {
    const bool connector = c.kind() != ComponentKind::Process && c.kind() != ComponentKind::Custom;
    std::string attrs;
    if (connector) {
      attrs = "label=" + dot_quote(detail::connector_glyph(c.kind()) + "\\n" + c.name()) +
              ", shape=circle, color=orange, fontcolor=orange";
    } else {
      attrs = "label=" + dot_quote(c.name());
    }
    std::string marks;
    if (entry_owners.count(c.name())) marks += "entry: " + *n.entry();
    if (exit_owners.count(c.name())) marks += (marks.empty() ? "" : "\\n") + std::string("exit: ") + *n.exit();
    if (!marks.empty()) {
      attrs += ", xlabel=" + dot_quote(marks) + ", penwidth=2";
      if (!connector) attrs += ", color=orange";
    }
    std::string env;
    for (const auto& p : c.in_ports()) {
      const auto& ch = n.channel(n.channel_of({c.name(), p.name}));
      if (!ch.driver && !(n.entry() && *n.entry() == ch.name)) env += (env.empty() ? "" : ",") + ch.name;
    }
    if (!env.empty()) attrs += ", tooltip=" + dot_quote("env: " + env);
    out += "  " + dot_quote(c.name()) + " [" + attrs + "];\n";
  }

  for (const auto& w : n.wires()) {
    if (!w.source) continue;
    std::string attrs = "label=" + dot_quote(w.channel);
    attrs += w.control ? ", color=orange, style=bold" : ", color=black";
    out += "  " + dot_quote(w.source->component) + " -> " + dot_quote(w.sink.component) + " [" + attrs +
           ", taillabel=" + dot_quote(w.source->port) + ", headlabel=" + dot_quote(w.sink.port) + "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace procview::io
