#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "procview/diagnostics.hpp"
#include "procview/expr.hpp"
#include "procview/message.hpp"

namespace procview {

/// Entry and exit ports every process-derived component gets.
inline constexpr const char* kStartPort = "start";
inline constexpr const char* kStopPort = "stop";

enum class Direction { Input, Output };

struct ChannelDecl {
  std::string name;
  MessageType type;
  Direction direction = Direction::Input;
  friend bool operator==(const ChannelDecl&, const ChannelDecl&) = default;
};

/// One-element buffer for a data input, with its initial value.
struct BufferDecl {
  std::string channel;
  Message init;
  friend bool operator==(const BufferDecl&, const BufferDecl&) = default;
};

/// Local variable with a once-only initial value.
struct LocalDecl {
  std::string name;
  MessageType type;
  Message init;
  friend bool operator==(const LocalDecl&, const LocalDecl&) = default;
};

struct ParamDecl {
  std::string name;
  MessageType type;
  Message value;
  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

enum class TargetKind { Output, Buffer, Local };

/// `y := <e1, e2>` (output), `buf(x) := e` (buffer) or `c := e` (local).
/// For outputs `elements` is the emitted interval; otherwise it holds
/// exactly one expression.
struct Assignment {
  TargetKind kind = TargetKind::Local;
  std::string target;
  std::vector<ExprPtr> elements;

  static Assignment output(std::string y, std::vector<ExprPtr> elems) {
    return {TargetKind::Output, std::move(y), std::move(elems)};
  }
  static Assignment local(std::string v, ExprPtr e) { return {TargetKind::Local, std::move(v), {std::move(e)}}; }
  static Assignment buffer(std::string x, ExprPtr e) { return {TargetKind::Buffer, std::move(x), {std::move(e)}}; }
};

inline bool operator==(const Assignment& a, const Assignment& b) {
  if (a.kind != b.kind || a.target != b.target || a.elements.size() != b.elements.size()) return false;
  for (std::size_t i = 0; i < a.elements.size(); ++i)
    if (!equal(a.elements[i], b.elements[i])) return false;
  return true;
}

struct MsgBoundAssumption {
  std::size_t bound = 1;
  std::string channel;
  friend bool operator==(const MsgBoundAssumption&, const MsgBoundAssumption&) = default;
};

/// Per-interval predicate over the current input intervals and params. It
/// is vacuously satisfied at ticks where a channel it reads via ft() is empty.
struct PredicateAssumption {
  ExprPtr predicate;
  friend bool operator==(const PredicateAssumption& a, const PredicateAssumption& b) {
    return equal(a.predicate, b.predicate);
  }
};

using AssumptionDecl = std::variant<MsgBoundAssumption, PredicateAssumption>;

struct BehaviorSpec {
  ExprPtr pr_ending;
  std::vector<Assignment> pr_calc;
  std::optional<std::vector<Assignment>> pr_calc_f;  // defaults to pr_calc
  std::vector<Assignment> init_process;               // locals only
  std::vector<AssumptionDecl> assumptions;
  std::vector<LocalDecl> locals;

  const std::vector<Assignment>& final_calc() const { return pr_calc_f ? *pr_calc_f : pr_calc; }

  friend bool operator==(const BehaviorSpec& a, const BehaviorSpec& b) {
    return equal(a.pr_ending, b.pr_ending) && a.pr_calc == b.pr_calc && a.pr_calc_f == b.pr_calc_f &&
           a.init_process == b.init_process && a.assumptions == b.assumptions && a.locals == b.locals;
  }
};

struct ElementaryProcessSpec {
  std::string name;
  std::vector<ParamDecl> params;
  std::vector<ChannelDecl> channels;
  std::vector<BufferDecl> buffers;
  BehaviorSpec behavior;
  std::optional<ExprPtr> declared_wcet;  // Int expression over params

  std::vector<ChannelDecl> inputs() const { return filter(Direction::Input); }
  std::vector<ChannelDecl> outputs() const { return filter(Direction::Output); }

  const ChannelDecl* channel(const std::string& n) const {
    for (const auto& c : channels)
      if (c.name == n) return &c;
    return nullptr;
  }
  const BufferDecl* buffer_for(const std::string& ch) const {
    for (const auto& b : buffers)
      if (b.channel == ch) return &b;
    return nullptr;
  }

  friend bool operator==(const ElementaryProcessSpec& a, const ElementaryProcessSpec& b) {
    const bool wcet_eq = a.declared_wcet.has_value() == b.declared_wcet.has_value() &&
                         (!a.declared_wcet || equal(*a.declared_wcet, *b.declared_wcet));
    return a.name == b.name && a.params == b.params && a.channels == b.channels &&
           a.buffers == b.buffers && a.behavior == b.behavior && wcet_eq;
  }

 private:
  std::vector<ChannelDecl> filter(Direction d) const {
    std::vector<ChannelDecl> out;
    for (const auto& c : channels)
      if (c.direction == d) out.push_back(c);
    return out;
  }
};

/// Parameter values after applying instantiation arguments over defaults.
using ParamValues = std::map<std::string, Message>;

inline ParamValues default_params(const ElementaryProcessSpec& spec) {
  ParamValues out;
  for (const auto& p : spec.params) out[p.name] = p.value;
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline TypeScope type_scope(const ElementaryProcessSpec& spec) {
  TypeScope scope;
  for (const auto& p : spec.params) scope.values[p.name] = p.type;
  for (const auto& l : spec.behavior.locals) scope.values[l.name] = l.type;
  for (const auto& c : spec.channels) {
    if (c.direction != Direction::Input) continue;
    scope.channels[c.name] = c.type;
    if (spec.buffer_for(c.name)) scope.buffers[c.name] = c.type;
  }
  return scope;
}

inline void report(std::vector<Diagnostic>& out, const std::vector<TypeIssue>& issues,
                   const std::string& where) {
  for (const auto& i : issues)
    out.push_back({i.kind == TypeIssue::Kind::UnresolvedSymbol ? DiagKind::UnresolvedSymbol
                                                               : DiagKind::TypeMismatch,
                   i.subject, where, i.message, {}, {}});
}

inline void expect_type(std::vector<Diagnostic>& out, const ExprPtr& e, const TypeScope& scope,
                        const MessageType& want, const std::string& where) {
  std::vector<TypeIssue> issues;
  auto t = infer(*e, scope, issues);
  report(out, issues, where);
  if (t && !assignable(*t, want))
    out.push_back({DiagKind::TypeMismatch, to_source(e), where,
                   "expected " + to_string(want) + ", found " + to_string(*t), {}, {}});
}

inline void check_assignments(std::vector<Diagnostic>& out, const ElementaryProcessSpec& spec,
                              const std::vector<Assignment>& assigns, const TypeScope& scope,
                              const std::string& where, bool locals_only) {
  std::set<std::pair<TargetKind, std::string>> seen;
  for (const auto& a : assigns) {
    if (!seen.insert({a.kind, a.target}).second)
      out.push_back({DiagKind::DuplicateAssignment, a.target, where,
                     "target assigned more than once", {}, {}});
    if (locals_only && a.kind != TargetKind::Local) {
      out.push_back({DiagKind::InvalidTarget, a.target, where,
                     "initProcess may only assign local variables", {}, {}});
      continue;
    }
    switch (a.kind) {
      case TargetKind::Output: {
        const auto* c = spec.channel(a.target);
        if (!c || c->direction != Direction::Output) {
          out.push_back({DiagKind::InvalidTarget, a.target, where,
                         "not an output channel", {}, {}});
          break;
        }
        for (const auto& e : a.elements) expect_type(out, e, scope, c->type, where);
        break;
      }
      case TargetKind::Buffer: {
        auto it = scope.buffers.find(a.target);
        if (it == scope.buffers.end()) {
          out.push_back({DiagKind::UnresolvedSymbol, a.target, where,
                         "no buffer for " + a.target, {}, {}});
          break;
        }
        expect_type(out, a.elements.at(0), scope, it->second, where);
        break;
      }
      case TargetKind::Local: {
        const LocalDecl* local = nullptr;
        for (const auto& l : spec.behavior.locals)
          if (l.name == a.target) local = &l;
        if (!local) {
          out.push_back({DiagKind::UnresolvedSymbol, a.target, where,
                         "unknown local variable " + a.target, {}, {}});
          break;
        }
        expect_type(out, a.elements.at(0), scope, local->type, where);
        break;
      }
    }
  }
}

}  // namespace detail

/// Checks every ElementaryProcessSpec invariant. Empty result means valid.
inline std::vector<Diagnostic> validate(const ElementaryProcessSpec& spec) {
  std::vector<Diagnostic> out;
  const std::string where = "process " + spec.name;

  std::set<std::string> names;
  auto declare = [&](const std::string& n, const std::string& what) {
    if (n == kStartPort || n == kStopPort) {
      out.push_back({DiagKind::ReservedName, n, where,
                     n + " is reserved for the entry/exit channel", {}, {}});
      return;
    }
    if (!names.insert(n).second)
      out.push_back({DiagKind::DuplicateName, n, where, what + " " + n + " is declared twice", {}, {}});
  };
  for (const auto& p : spec.params) {
    declare(p.name, "parameter");
    if (!conforms(p.value, p.type))
      out.push_back({DiagKind::TypeMismatch, p.name, where,
                     "value does not match parameter type " + to_string(p.type), {}, {}});
  }
  for (const auto& c : spec.channels) declare(c.name, "channel");
  for (const auto& l : spec.behavior.locals) {
    declare(l.name, "local");
    if (!conforms(l.init, l.type))
      out.push_back({DiagKind::TypeMismatch, l.name, where,
                     "initial value does not match local type " + to_string(l.type), {}, {}});
  }

  std::set<std::string> buffered;
  for (const auto& b : spec.buffers) {
    const auto* c = spec.channel(b.channel);
    if (!c || c->direction != Direction::Input) {
      out.push_back({DiagKind::UnknownBufferChannel, b.channel, where,
                     "buffer declared for something that is not a data input", {}, {}});
      continue;
    }
    if (!buffered.insert(b.channel).second)
      out.push_back({DiagKind::DuplicateBuffer, b.channel, where, "two buffers for one input", {}, {}});
    if (!conforms(b.init, c->type))
      out.push_back({DiagKind::TypeMismatch, b.channel, where,
                     "buffer initial value does not match channel type " + to_string(c->type), {}, {}});
  }
  for (const auto& c : spec.channels)
    if (c.direction == Direction::Input && !buffered.count(c.name))
      out.push_back({DiagKind::MissingBuffer, c.name, where, "input has no buffer", {}, {}});

  const TypeScope scope = detail::type_scope(spec);
  if (!spec.behavior.pr_ending)
    out.push_back({DiagKind::InvalidTarget, "ending", where, "missing ending predicate", {}, {}});
  else
    detail::expect_type(out, spec.behavior.pr_ending, scope, MessageType::boolean(), where + " / ending");
  detail::check_assignments(out, spec, spec.behavior.pr_calc, scope, where + " / calc", false);
  if (spec.behavior.pr_calc_f)
    detail::check_assignments(out, spec, *spec.behavior.pr_calc_f, scope, where + " / calcF", false);
  detail::check_assignments(out, spec, spec.behavior.init_process, scope, where + " / initProcess", true);

  for (const auto& a : spec.behavior.assumptions) {
    if (const auto* mb = std::get_if<MsgBoundAssumption>(&a)) {
      const auto* c = spec.channel(mb->channel);
      if (!c || c->direction != Direction::Input)
        out.push_back({DiagKind::UnresolvedSymbol, mb->channel, where + " / asm",
                       "msg bound on unknown input", {}, {}});
    } else {
      // Assumptions constrain the environment; they see inputs and params only.
      TypeScope asm_scope;
      for (const auto& p : spec.params) asm_scope.values[p.name] = p.type;
      asm_scope.channels = scope.channels;
      detail::expect_type(out, std::get<PredicateAssumption>(a).predicate, asm_scope,
                          MessageType::boolean(), where + " / asm");
    }
  }

  if (spec.declared_wcet) {
    TypeScope params_only;
    for (const auto& p : spec.params) params_only.values[p.name] = p.type;
    detail::expect_type(out, *spec.declared_wcet, params_only, MessageType::integer(), where + " / wcet");
  }
  return out;
}

}  // namespace procview
