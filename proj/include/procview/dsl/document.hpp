#pragma once

#include <memory>
#include <string>
#include <vector>

#include "procview/composition.hpp"
#include "procview/diagnostics.hpp"
#include "procview/stream.hpp"

namespace procview::dsl {

struct ProcessDecl {
  std::shared_ptr<const ElementaryProcessSpec> spec;
  SourcePos pos;
};

struct ComposeDecl {
  std::string name;
  ProcessExprPtr expr;
  SourcePos pos;
};

/// `a..b`, or a single tick when from == to.
struct TickRange {
  Tick from = 0;
  Tick to = 0;
  friend bool operator==(const TickRange&, const TickRange&) = default;
};

/// `ch @ 0, 3..5 = <1, 2>;` places the interval at each listed tick.
struct EnvEntry {
  std::string channel;
  std::vector<TickRange> ticks;
  std::vector<Message> interval;
  SourcePos pos;
};

struct EnvDecl {
  std::string name;
  std::vector<EnvEntry> entries;
  SourcePos pos;
};

/// Parsed .pspec file. Equality is structural and ignores source positions.
struct SpecDocument {
  std::vector<ProcessDecl> processes;
  std::vector<ComposeDecl> compositions;
  std::vector<EnvDecl> envs;

  const ElementaryProcessSpec* process(const std::string& name) const {
    for (const auto& p : processes)
      if (p.spec->name == name) return p.spec.get();
    return nullptr;
  }
  std::shared_ptr<const ElementaryProcessSpec> process_ptr(const std::string& name) const {
    for (const auto& p : processes)
      if (p.spec->name == name) return p.spec;
    return nullptr;
  }
  const ComposeDecl* composition(const std::string& name) const {
    for (const auto& c : compositions)
      if (c.name == name) return &c;
    return nullptr;
  }
  const EnvDecl* env(const std::string& name) const {
    for (const auto& e : envs)
      if (e.name == name) return &e;
    return nullptr;
  }
};

inline bool operator==(const EnvEntry& a, const EnvEntry& b) {
  return a.channel == b.channel && a.ticks == b.ticks && a.interval == b.interval;
}
inline bool operator==(const EnvDecl& a, const EnvDecl& b) { return a.name == b.name && a.entries == b.entries; }

inline bool operator==(const SpecDocument& a, const SpecDocument& b) {
  if (a.processes.size() != b.processes.size() || a.compositions.size() != b.compositions.size()) return false;
  for (std::size_t i = 0; i < a.processes.size(); ++i)
    if (!(*a.processes[i].spec == *b.processes[i].spec)) return false;
  for (std::size_t i = 0; i < a.compositions.size(); ++i)
    if (a.compositions[i].name != b.compositions[i].name ||
        !equal(a.compositions[i].expr, b.compositions[i].expr))
      return false;
  return a.envs == b.envs;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_assignments(const std::vector<Assignment>& as, std::string& out) {
  for (const auto& a : as) {
    out += "    ";
    switch (a.kind) {
      case TargetKind::Output: {
        out += a.target + " := <";
        for (std::size_t i = 0; i < a.elements.size(); ++i) {
          if (i) out += ", ";
          // Elements sit inside angle brackets, so comparisons need parentheses.
          out += to_source(a.elements[i], 4);
        }
        out += ">";
        break;
      }
      case TargetKind::Buffer: out += "buf(" + a.target + ") := " + to_source(a.elements.front()); break;
      case TargetKind::Local: out += a.target + " := " + to_source(a.elements.front()); break;
    }
    out += ";\n";
  }
}

inline void print_expr_tree(const ProcessExpr& e, int min_prec, std::string& out);

inline std::string chooser_suffix(const ChooserPolicy& c) {
  if (std::holds_alternative<RoundRobin>(c)) return "";
  if (const auto* f = std::get_if<FixedChoice>(&c)) return f->branch == Branch::Left ? "[left]" : "[right]";
  return "[random " + std::to_string(std::get<SeededRandom>(c).seed) + "]";
}

// Levels: 1 for `||` and `(+)`, 2 for `;`, 3 for loops and leaves.
inline int expr_level(const ProcessExpr& e) {
  if (std::holds_alternative<pexpr::Seq>(e.node)) return 2;
  if (std::holds_alternative<pexpr::Par>(e.node) || std::holds_alternative<pexpr::Alt>(e.node)) return 1;
  return 3;
}

inline void print_expr_tree(const ProcessExpr& e, int min_prec, std::string& out) {
  const int level = expr_level(e);
  if (level < min_prec) {
    out += '(';
    print_expr_tree(e, 0, out);
    out += ')';
    return;
  }
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) {
          out += n.name;
          if (!n.args.empty()) {
            out += '(';
            bool first = true;
            for (const auto& [k, v] : n.args) {
              out += (first ? "" : ", ") + k + "=" + to_string(v, MessageStyle::Source);
              first = false;
            }
            out += ')';
          }
        } else if constexpr (std::is_same_v<T, pexpr::LoopAuto>) {
          out += "loop(auto " + std::to_string(n.delay) + ") ";
          print_expr_tree(*n.body, 3, out);
        } else if constexpr (std::is_same_v<T, pexpr::LoopNonAuto>) {
          out += "loop(manual restart=";
          out += n.policy.allow_restart_while_running ? "true" : "false";
          out += " gap=" + std::to_string(n.policy.min_gap_ticks) + ") ";
          print_expr_tree(*n.body, 3, out);
        } else {
          print_expr_tree(*n.left, level, out);
          if constexpr (std::is_same_v<T, pexpr::Seq>) out += " ; ";
          else if constexpr (std::is_same_v<T, pexpr::Par>) out += " || ";
          else out += " (+)" + chooser_suffix(n.chooser) + " ";
          print_expr_tree(*n.right, level + 1, out);
        }
      },
      e.node);
}

}  // namespace detail

inline std::string print_expr(const ProcessExprPtr& e) {
  std::string out;
  detail::print_expr_tree(*e, 0, out);
  return out;
}

inline std::string print_process(const ElementaryProcessSpec& s) {
  std::string out = "process " + s.name + "(";
  for (std::size_t i = 0; i < s.params.size(); ++i) {
    const auto& p = s.params[i];
    if (i) out += ", ";
    out += p.name + ": " + to_string(p.type) + " = " + to_string(p.value, MessageStyle::Source);
  }
  out += ") {\n";
  for (const auto& c : s.channels)
    out += std::string("  ") + (c.direction == Direction::Input ? "in " : "out ") + c.name + ": " +
           to_string(c.type) + ";\n";
  for (const auto& b : s.buffers) out += "  buf " + b.channel + " = " + to_string(b.init, MessageStyle::Source) + ";\n";
  const auto& beh = s.behavior;
  for (const auto& l : beh.locals)
    out += "  init " + l.name + ": " + to_string(l.type) + " = " + to_string(l.init, MessageStyle::Source) + ";\n";
  for (const auto& a : beh.init_process) out += "  initProcess " + a.target + " := " + to_source(a.elements.front()) + ";\n";
  for (const auto& a : beh.assumptions) {
    if (const auto* m = std::get_if<MsgBoundAssumption>(&a))
      out += "  asm msg(" + std::to_string(m->bound) + ", " + m->channel + ");\n";
    else
      out += "  asm " + to_source(std::get<PredicateAssumption>(a).predicate) + ";\n";
  }
  out += "  ending: " + to_source(beh.pr_ending) + ";\n";
  out += "  calc:\n";
  detail::print_assignments(beh.pr_calc, out);
  if (beh.pr_calc_f) {
    out += "  calcF:\n";
    detail::print_assignments(*beh.pr_calc_f, out);
  }
  if (s.declared_wcet) out += "  wcet: " + to_source(*s.declared_wcet) + ";\n";
  out += "}\n";
  return out;
}

inline std::string print_env(const EnvDecl& e) {
  std::string out = "env " + e.name + " {\n";
  for (const auto& en : e.entries) {
    out += "  " + en.channel + " @ ";
    for (std::size_t i = 0; i < en.ticks.size(); ++i) {
      if (i) out += ", ";
      const auto& r = en.ticks[i];
      out += std::to_string(r.from);
      if (r.to != r.from) out += ".." + std::to_string(r.to);
    }
    out += " = <";
    for (std::size_t i = 0; i < en.interval.size(); ++i)
      out += (i ? ", " : "") + to_string(en.interval[i], MessageStyle::Source);
    out += ">;\n";
  }
  out += "}\n";
  return out;
}

/// Canonical text of a document: processes, then compositions, then
/// environments, separated by blank lines.
inline std::string print(const SpecDocument& doc) {
  std::vector<std::string> blocks;
  for (const auto& p : doc.processes) blocks.push_back(print_process(*p.spec));
  for (const auto& c : doc.compositions) blocks.push_back("compose " + c.name + " = " + print_expr(c.expr) + "\n");
  for (const auto& e : doc.envs) blocks.push_back(print_env(e));
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) out += (i ? "\n" : "") + blocks[i];
  return out;
}

}  // namespace procview::dsl
