#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "procview/activity.hpp"
#include "procview/dsl/parser.hpp"
#include "procview/io/dot.hpp"
#include "procview/io/pnml.hpp"
#include "procview/io/trace_export.hpp"
#include "procview/wcet.hpp"

/// Subcommand implementations behind the `procview` executable. Each returns
/// the process exit code: 0 on success, 1 when diagnostics or evaluation
/// errors were reported, 2 on usage errors.
namespace procview::cli {

inline constexpr int kOk = 0;
inline constexpr int kDiagnostics = 1;
inline constexpr int kUsage = 2;

struct Loaded {
  dsl::ParseResult parsed;
  bool read_ok = false;
};

inline Loaded load(const std::string& path, std::ostream& err) {
  Loaded l;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << path << "\n";
    return l;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  l.read_ok = true;
  l.parsed = dsl::parse(ss.str());
  for (const auto& d : l.parsed.diagnostics) err << path << ":" << d << "\n";
  return l;
}

inline const dsl::ComposeDecl* find_compose(const dsl::SpecDocument& doc, const std::string& name, std::ostream& err) {
  const auto* c = doc.composition(name);
  if (!c) err << "error[UnresolvedReference](" << name << "): no composition named " << name << "\n";
  return c;
}

inline bool write_output(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
  if (path.empty() || path == "-") {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

inline void report(const Error& e, std::ostream& err) { err << "error: " << e.what() << "\n"; }

// ---------------------------------------------------------------------------

inline int check(const std::string& path, std::ostream& out, std::ostream& err) {
  Loaded l = load(path, err);
  if (!l.read_ok) return kDiagnostics;
  if (!l.parsed.ok()) return kDiagnostics;
  int failures = 0;
  for (const auto& c : l.parsed.doc.compositions) {
    try {
      const Network n = compile(c.expr);
      schedule(n);
    } catch (const Error& e) {
      const Diagnostic d{DiagKind::CompileError, c.name, "compose " + c.name, e.what(), c.pos, {}};
      err << path << ":" << d << "\n";
      ++failures;
    }
  }
  if (failures) return kDiagnostics;
  const auto& doc = l.parsed.doc;
  out << "ok: " << doc.processes.size() << " process(es), " << doc.compositions.size() << " composition(s), "
      << doc.envs.size() << " environment(s)\n";
  return kOk;
}

struct SimulateOptions {
  std::string file;
  std::string compose;
  std::string env;
  std::size_t horizon = 0;
  std::string trace_out;
  std::string format = "text";  // text | structured
};

inline int simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  if (o.format != "text" && o.format != "structured") {
    err << "error: --format must be text or structured\n";
    return kUsage;
  }
  Loaded l = load(o.file, err);
  if (!l.read_ok || !l.parsed.ok()) return kDiagnostics;
  const auto* c = find_compose(l.parsed.doc, o.compose, err);
  if (!c) return kDiagnostics;
  const auto* e = l.parsed.doc.env(o.env);
  if (!e) {
    err << "error[UnresolvedReference](" << o.env << "): no environment named " << o.env << "\n";
    return kDiagnostics;
  }
  try {
    const Network n = compile(c->expr);
    std::vector<std::string> ignored;
    const Trace tr = run(n, dsl::to_env_inputs(*e, n, o.horizon, &ignored), o.horizon);
    for (const auto& w : ignored) err << "warning: " << w << "\n";
    const std::string text = o.format == "text" ? io::trace_text(tr) : io::trace_json_text(tr);
    if (!o.trace_out.empty()) {
      if (!write_output(o.trace_out, text, out, err)) return kDiagnostics;
    } else {
      out << text;
    }
    out << "simulated " << o.compose << " with " << o.env << " over " << o.horizon << " ticks: "
        << n.components().size() << " components, " << tr.channels.size() << " channels\n";
    if (n.exit()) {
      out << "exit " << *n.exit() << " at:";
      for (Tick t : tr.event_ticks(*n.exit())) out << ' ' << t;
      out << "\n";
    }
    for (const auto& w : tr.warnings)
      out << "warning t=" << w.tick << " " << to_string(w.kind) << " " << w.location << "\n";
    if (tr.unconstrained_from) out << "assumptions violated from tick " << *tr.unconstrained_from << "\n";
  } catch (const Error& ex) {
    report(ex, err);
    return kDiagnostics;
  }
  return kOk;
}

struct WcetOptions {
  std::string file;
  std::string compose;
  std::string bounds = "declared";          // declared | measured
  std::string connector_cost = "zero";      // zero | measured
  std::size_t horizon = 256;                // measurement horizon
};

inline void print_derivation(const WcetNode& n, int indent, std::ostream& out) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << n.label << " = " << n.value << "\n";
  for (const auto& c : n.children) print_derivation(c, indent + 1, out);
}

inline int wcet(const WcetOptions& o, std::ostream& out, std::ostream& err) {
  if (o.bounds != "declared" && o.bounds != "measured") {
    err << "error: --bounds must be declared or measured\n";
    return kUsage;
  }
  if (o.connector_cost != "zero" && o.connector_cost != "measured") {
    err << "error: --connector-cost must be zero or measured\n";
    return kUsage;
  }
  Loaded l = load(o.file, err);
  if (!l.read_ok || !l.parsed.ok()) return kDiagnostics;
  const auto* c = find_compose(l.parsed.doc, o.compose, err);
  if (!c) return kDiagnostics;
  try {
    const ElementaryBounds b = o.bounds == "declared" ? declared_bounds(c->expr) : measured_bounds(c->expr, o.horizon);
    const auto mode = o.connector_cost == "zero" ? ConnectorCostMode::Zero : ConnectorCostMode::Measured;
    const WcetReport r = procview::wcet(c->expr, b, mode);
    out << "wcet(" << o.compose << ") = " << r.bound << "  [bounds=" << o.bounds
        << ", connector-cost=" << o.connector_cost << "]\n";
    if (mode == ConnectorCostMode::Measured)
      out << "connector costs: & " << r.costs.join << ", @ " << r.costs.split << ", + " << r.costs.merge
          << ", delay " << r.costs.delay << "\n";
    print_derivation(r.derivation, 0, out);
  } catch (const Error& ex) {
    report(ex, err);
    return kDiagnostics;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// Activity queries: `kind(args)` optionally followed by `@tick`, e.g.
// `active(P)`, `on(P, y)@3`, `exact(P, 1)`, `set_lower({P, Q}, 1)`,
// `disjoint(P)`.

inline ActivityQuery parse_query(const std::string& text) {
  std::size_t i = 0;
  auto bad = [&](const std::string& why) -> Error {
    return Error(ErrorCode::InvalidBound, "query `" + text + "`: " + why);
  };
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto word = [&] {
    skip();
    const std::size_t b = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '.'))
      ++i;
    if (b == i) throw bad("expected a name at offset " + std::to_string(b));
    return text.substr(b, i - b);
  };
  auto number = [&] {
    skip();
    const std::size_t b = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (b == i) throw bad("expected a number at offset " + std::to_string(b));
    return static_cast<std::size_t>(std::stoull(text.substr(b, i - b)));
  };
  auto expect = [&](char c) {
    skip();
    if (i >= text.size() || text[i] != c) throw bad(std::string("expected `") + c + "`");
    ++i;
  };
  auto peek_is = [&](char c) {
    skip();
    return i < text.size() && text[i] == c;
  };

  static const std::map<std::string, QueryKind> kinds{
      {"on", QueryKind::OnStream},          {"only_on", QueryKind::OnlyOnStream},
      {"active", QueryKind::Any},           {"lower", QueryKind::Lower},
      {"upper", QueryKind::Upper},          {"exact", QueryKind::Exact},
      {"set_any", QueryKind::SetAny},       {"set_lower", QueryKind::SetLower},
      {"set_upper", QueryKind::SetUpper},   {"set_exact", QueryKind::SetExact},
      {"set_lower_comp", QueryKind::SetLowerComp}, {"set_upper_comp", QueryKind::SetUpperComp},
      {"set_exact_comp", QueryKind::SetExactComp}, {"disjoint", QueryKind::DisjointOutputs}};
  ActivityQuery q;
  const std::string k = word();
  auto it = kinds.find(k);
  if (it == kinds.end()) throw bad("unknown query kind " + k);
  q.kind = it->second;
  expect('(');
  if (is_set_query(q.kind)) {
    expect('{');
    q.subject.push_back(word());
    while (peek_is(',')) {
      ++i;
      q.subject.push_back(word());
    }
    expect('}');
  } else {
    q.subject.push_back(word());
  }
  if (q.kind == QueryKind::OnStream || q.kind == QueryKind::OnlyOnStream) {
    expect(',');
    q.stream = word();
  } else if (q.kind != QueryKind::Any && q.kind != QueryKind::SetAny && q.kind != QueryKind::DisjointOutputs) {
    expect(',');
    q.rb = number();
  }
  expect(')');
  if (peek_is('@')) {
    ++i;
    q.tick = number();
  }
  skip();
  if (i != text.size()) throw bad("trailing input");
  return q;
}

struct ActivityOptions {
  std::string file;
  std::string compose;
  std::string env;
  std::string query;
  std::size_t horizon = 32;
};

inline int activity(const ActivityOptions& o, std::ostream& out, std::ostream& err) {
  ActivityQuery q;
  try {
    q = parse_query(o.query);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  }
  Loaded l = load(o.file, err);
  if (!l.read_ok || !l.parsed.ok()) return kDiagnostics;
  const auto* c = find_compose(l.parsed.doc, o.compose, err);
  if (!c) return kDiagnostics;
  const auto* e = l.parsed.doc.env(o.env);
  if (!e) {
    err << "error[UnresolvedReference](" << o.env << "): no environment named " << o.env << "\n";
    return kDiagnostics;
  }
  try {
    const Network n = compile(c->expr);
    std::vector<std::string> ignored;
    const Trace tr = run(n, dsl::to_env_inputs(*e, n, o.horizon, &ignored), o.horizon);
    for (const auto& w : ignored) err << "warning: " << w << "\n";
    const QueryResult r = evaluate(q, tr, n);
    out << "query " << o.query << ": " << (r.holds ? "holds" : "fails") << "\n";
    if (r.disjointness) {
      out << "exactly one output active at every tick: " << (r.disjointness->exactly_one_always ? "yes" : "no")
          << "\n";
      out << "outputs disjoint: " << (r.disjointness->disjoint ? "yes" : "no") << "\n";
    } else if (!q.tick) {
      out << "holding ticks:";
      for (Tick t : r.holding_ticks) out << ' ' << t;
      out << "\n";
    }
  } catch (const Error& ex) {
    report(ex, err);
    return kDiagnostics;
  }
  return kOk;
}

struct ExportOptions {
  std::string file;
  std::string compose;
  std::string to;  // dot | pnml
  std::string out_path;
};

inline int export_cmd(const ExportOptions& o, std::ostream& out, std::ostream& err) {
  if (o.to != "dot" && o.to != "pnml") {
    err << "error: --to must be dot or pnml\n";
    return kUsage;
  }
  Loaded l = load(o.file, err);
  if (!l.read_ok || !l.parsed.ok()) return kDiagnostics;
  const auto* c = find_compose(l.parsed.doc, o.compose, err);
  if (!c) return kDiagnostics;
  try {
    const std::string text =
        o.to == "dot" ? io::to_dot(compile(c->expr), o.compose) : io::to_pnml(io::to_petri_net(c->expr, o.compose));
    if (!write_output(o.out_path, text, out, err)) return kDiagnostics;
    if (!o.out_path.empty() && o.out_path != "-") out << "wrote " << o.to << " for " << o.compose << " to " << o.out_path << "\n";
  } catch (const Error& ex) {
    report(ex, err);
    return kDiagnostics;
  }
  return kOk;
}

}  // namespace procview::cli
