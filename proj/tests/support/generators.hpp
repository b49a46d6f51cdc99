#pragma once

// Random and fixed fixtures shared by the unit, property and acceptance tests.

#include <cstdint>
#include <functional>
#include <set>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "procview/composition.hpp"
#include "procview/dsl/document.hpp"
#include "procview/simulation.hpp"

namespace procview::fixtures {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Fixed-duration processes

/// Runs for exactly `d` ticks after its start event (d >= 1): the stop event
/// comes d ticks after the start. Declares wcet d.
inline std::shared_ptr<const ElementaryProcessSpec> timer_spec(const std::string& name = "T") {
  ElementaryProcessSpec s;
  s.name = name;
  s.params = {{"d", MessageType::integer(), Message(1)}};
  s.behavior.locals = {{"c", MessageType::integer(), Message(0)}};
  s.behavior.init_process = {Assignment::local("c", lit(Message(1)))};
  s.behavior.pr_ending = binary(BinaryOp::Ge, ref("c"), ref("d"));
  s.behavior.pr_calc = {Assignment::local("c", binary(BinaryOp::Add, ref("c"), lit(Message(1))))};
  s.declared_wcet = ref("d");
  return std::make_shared<const ElementaryProcessSpec>(std::move(s));
}

inline ProcessExprPtr timer(Tick d, const std::string& name = "T") {
  static auto spec = timer_spec("T");
  auto s = name == "T" ? spec : timer_spec(name);
  return elem(s, {{"d", Message(static_cast<std::int64_t>(d))}});
}

/// Ending holds on the first active tick.
inline std::shared_ptr<const ElementaryProcessSpec> instant_spec(const std::string& name = "Z") {
  ElementaryProcessSpec s;
  s.name = name;
  s.behavior.pr_ending = lit(Message(true));
  s.declared_wcet = lit(Message(1));
  return std::make_shared<const ElementaryProcessSpec>(std::move(s));
}

inline std::vector<const pexpr::Alt*> alt_nodes(const ProcessExpr& e) {
  std::vector<const pexpr::Alt*> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) {
        } else if constexpr (std::is_same_v<T, pexpr::LoopAuto> || std::is_same_v<T, pexpr::LoopNonAuto>) {
          auto inner = alt_nodes(*n.body);
          out.insert(out.end(), inner.begin(), inner.end());
        } else {
          if constexpr (std::is_same_v<T, pexpr::Alt>) out.push_back(&n);
          auto l = alt_nodes(*n.left), r = alt_nodes(*n.right);
          out.insert(out.end(), l.begin(), l.end());
          out.insert(out.end(), r.begin(), r.end());
        }
      },
      e.node);
  return out;
}

inline std::size_t count_alts(const ProcessExpr& e) { return alt_nodes(e).size(); }

/// Copy of `e` whose alternates (in pre-order) use the given fixed branches.
inline ProcessExprPtr with_choices(const ProcessExprPtr& e, const std::vector<Branch>& choices, std::size_t& next) {
  return std::visit(
      [&](const auto& n) -> ProcessExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) return e;
        else if constexpr (std::is_same_v<T, pexpr::Seq>) {
          auto l = with_choices(n.left, choices, next);
          return seq(l, with_choices(n.right, choices, next));
        } else if constexpr (std::is_same_v<T, pexpr::Par>) {
          auto l = with_choices(n.left, choices, next);
          return par(l, with_choices(n.right, choices, next));
        } else if constexpr (std::is_same_v<T, pexpr::Alt>) {
          const Branch b = choices.at(next++);
          auto l = with_choices(n.left, choices, next);
          return alt(l, with_choices(n.right, choices, next), FixedChoice{b});
        } else if constexpr (std::is_same_v<T, pexpr::LoopAuto>) {
          return loop_auto(with_choices(n.body, choices, next), n.delay);
        } else {
          return loop_manual(with_choices(n.body, choices, next), n.policy);
        }
      },
      e->node);
}

inline ProcessExprPtr with_choices(const ProcessExprPtr& e, const std::vector<Branch>& choices) {
  std::size_t next = 0;
  return with_choices(e, choices, next);
}

/// Every assignment of fixed branches to the alternates of `e`.
inline std::vector<ProcessExprPtr> all_choice_variants(const ProcessExprPtr& e) {
  const std::size_t k = count_alts(*e);
  std::vector<ProcessExprPtr> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<Branch> choices;
    for (std::size_t i = 0; i < k; ++i) choices.push_back((mask >> i) & 1U ? Branch::Right : Branch::Left);
    out.push_back(with_choices(e, choices));
  }
  return out;
}

enum class Op { Seq, Par, Alt };

inline ProcessExprPtr combine(Op op, ProcessExprPtr l, ProcessExprPtr r) {
  switch (op) {
    case Op::Seq: return seq(std::move(l), std::move(r));
    case Op::Par: return par(std::move(l), std::move(r));
    case Op::Alt: return alt(std::move(l), std::move(r));
  }
  return nullptr;
}

/// Random Seq/Par/Alt tree of exactly the given depth over timers with
/// durations in [1, max_d].
inline ProcessExprPtr random_tree(Rng& rng, std::size_t depth, Tick max_d = 6) {
  if (depth == 0) return timer(static_cast<Tick>(rng.uniform(1, static_cast<int>(max_d))));
  const Op op = static_cast<Op>(rng.uniform(0, 2));
  const bool left_deep = rng.chance(0.5);
  auto deep = random_tree(rng, depth - 1, max_d);
  auto other = random_tree(rng, static_cast<std::size_t>(rng.uniform(0, static_cast<int>(depth) - 1)), max_d);
  return left_deep ? combine(op, deep, other) : combine(op, other, deep);
}

// Re-draws the leaves of a shape so that siblings get independent durations.
template <class Leaf>
ProcessExprPtr leaf_copy(const ProcessExprPtr& e, Leaf&& leaf) {
  return std::visit(
      [&](const auto& n) -> ProcessExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) return leaf();
        else if constexpr (std::is_same_v<T, pexpr::Seq>) return seq(leaf_copy(n.left, leaf), leaf_copy(n.right, leaf));
        else if constexpr (std::is_same_v<T, pexpr::Par>) return par(leaf_copy(n.left, leaf), leaf_copy(n.right, leaf));
        else if constexpr (std::is_same_v<T, pexpr::Alt>)
          return alt(leaf_copy(n.left, leaf), leaf_copy(n.right, leaf), n.chooser);
        else return e;
      },
      e->node);
}

/// All tree shapes of depth at most `depth` over a single placeholder leaf,
/// with leaves filled from `leaf()`.
template <class Leaf>
std::vector<ProcessExprPtr> all_shapes(std::size_t depth, Leaf&& leaf) {
  if (depth == 0) return {leaf()};
  std::vector<ProcessExprPtr> smaller = all_shapes(depth - 1, leaf);
  std::vector<ProcessExprPtr> out = smaller;
  for (Op op : {Op::Seq, Op::Par, Op::Alt})
    for (const auto& l : smaller)
      for (const auto& r : smaller) {
        if (procview::depth(*l) + 1 < depth && procview::depth(*r) + 1 < depth) continue;
        out.push_back(combine(op, leaf_copy(l, leaf), leaf_copy(r, leaf)));
      }
  return out;
}

// ---------------------------------------------------------------------------
// Random elementary processes

struct GenScope {
  std::vector<std::pair<std::string, MessageType>> values;  // params and locals
  std::vector<ChannelDecl> inputs;
};

inline MessageType color_type() { return MessageType::enumeration({"Red", "Green", "Blue"}); }

inline Message random_value(Rng& rng, const MessageType& t) {
  switch (t.kind) {
    case TypeKind::Event: return Message::event();
    case TypeKind::Int: return Message(static_cast<std::int64_t>(rng.uniform(-20, 20)));
    case TypeKind::Bool: return Message(rng.chance(0.5));
    case TypeKind::Enum: return Message(Symbol{rng.pick(t.symbols)});
  }
  return Message::event();
}

inline ExprPtr random_expr(Rng& rng, const GenScope& s, const MessageType& t, int depth);

inline ExprPtr random_leaf(Rng& rng, const GenScope& s, const MessageType& t) {
  std::vector<ExprPtr> options{lit(random_value(rng, t))};
  for (const auto& [name, vt] : s.values)
    if (vt == t) options.push_back(ref(name));
  for (const auto& c : s.inputs) {
    if (c.type == t) {
      options.push_back(ft_of(c.name));
      options.push_back(buf(c.name));
    }
    if (t.kind == TypeKind::Bool) options.push_back(present(c.name));
  }
  return rng.pick(options);
}

inline ExprPtr random_expr(Rng& rng, const GenScope& s, const MessageType& t, int depth) {
  if (depth <= 0 || rng.chance(0.3)) return random_leaf(rng, s, t);
  const int d = depth - 1;
  if (rng.chance(0.12)) return cond(random_expr(rng, s, MessageType::boolean(), d), random_expr(rng, s, t, d),
                                    random_expr(rng, s, t, d));
  switch (t.kind) {
    case TypeKind::Int: {
      if (rng.chance(0.15)) return unary(UnaryOp::Neg, random_expr(rng, s, t, d));
      static const std::vector<BinaryOp> ops{BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                             BinaryOp::Mod};
      return binary(rng.pick(ops), random_expr(rng, s, t, d), random_expr(rng, s, t, d));
    }
    case TypeKind::Bool: {
      const int k = rng.uniform(0, 3);
      if (k == 0) return unary(UnaryOp::Not, random_expr(rng, s, t, d));
      if (k == 1) {
        static const std::vector<BinaryOp> ops{BinaryOp::And, BinaryOp::Or};
        return binary(rng.pick(ops), random_expr(rng, s, t, d), random_expr(rng, s, t, d));
      }
      if (k == 2) {
        static const std::vector<BinaryOp> ops{BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt,
                                               BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
        return binary(rng.pick(ops), random_expr(rng, s, MessageType::integer(), d),
                      random_expr(rng, s, MessageType::integer(), d));
      }
      return binary(rng.chance(0.5) ? BinaryOp::Eq : BinaryOp::Ne, random_expr(rng, s, color_type(), d),
                    random_expr(rng, s, color_type(), d));
    }
    default: return random_leaf(rng, s, t);
  }
}

inline MessageType random_type(Rng& rng) {
  switch (rng.uniform(0, 3)) {
    case 0: return MessageType::event();
    case 1: return MessageType::integer();
    case 2: return MessageType::boolean();
    default: return color_type();
  }
}

inline std::vector<Assignment> random_assignments(Rng& rng, const GenScope& s, const ElementaryProcessSpec& spec,
                                                  int depth, bool allow_buffers) {
  std::vector<Assignment> out;
  for (const auto& c : spec.channels) {
    if (c.direction != Direction::Output || rng.chance(0.25)) continue;
    std::vector<ExprPtr> elems;
    const int n = rng.uniform(0, 2);
    for (int i = 0; i < n; ++i) elems.push_back(random_expr(rng, s, c.type, depth));
    out.push_back(Assignment::output(c.name, std::move(elems)));
  }
  for (const auto& l : spec.behavior.locals)
    if (rng.chance(0.7)) out.push_back(Assignment::local(l.name, random_expr(rng, s, l.type, depth)));
  if (allow_buffers)
    for (const auto& c : s.inputs)
      if (rng.chance(0.15)) out.push_back(Assignment::buffer(c.name, random_expr(rng, s, c.type, depth)));
  return out;
}

struct RandomSpecOptions {
  int max_inputs = 3;
  int max_outputs = 2;
  int depth = 3;
  bool buffer_assignments = false;
  bool assumptions = true;
  bool params = true;
  std::string input_prefix = "x";
  std::string output_prefix = "y";
  std::vector<ChannelDecl> extra_inputs;  // read in addition to the generated ones
};

/// Well-formed random elementary process.
inline std::shared_ptr<const ElementaryProcessSpec> random_spec(Rng& rng, const std::string& name,
                                                                const RandomSpecOptions& o = {}) {
  ElementaryProcessSpec s;
  s.name = name;
  GenScope scope;
  if (o.params && rng.chance(0.5)) {
    s.params.push_back({"k1", MessageType::integer(), Message(static_cast<std::int64_t>(rng.uniform(-5, 9)))});
    scope.values.push_back({"k1", MessageType::integer()});
  }
  if (o.params && rng.chance(0.3)) {
    s.params.push_back({"k2", MessageType::boolean(), Message(rng.chance(0.5))});
    scope.values.push_back({"k2", MessageType::boolean()});
  }
  const int n_in = rng.uniform(0, o.max_inputs), n_out = rng.uniform(0, o.max_outputs);
  std::vector<ChannelDecl> ins = o.extra_inputs;
  for (int i = 1; i <= n_in; ++i) ins.push_back({o.input_prefix + std::to_string(i), random_type(rng), Direction::Input});
  for (auto& c : ins) {
    c.direction = Direction::Input;
    s.buffers.push_back({c.name, random_value(rng, c.type)});
    scope.inputs.push_back(c);
    s.channels.push_back(std::move(c));
  }
  for (int i = 1; i <= n_out; ++i)
    s.channels.push_back({o.output_prefix + std::to_string(i), random_type(rng), Direction::Output});

  const int n_locals = rng.uniform(0, 2);
  for (int i = 1; i <= n_locals; ++i) {
    const MessageType t = rng.chance(0.6) ? MessageType::integer() : (rng.chance(0.5) ? MessageType::boolean() : color_type());
    s.behavior.locals.push_back({"v" + std::to_string(i), t, random_value(rng, t)});
    scope.values.push_back({"v" + std::to_string(i), t});
  }
  for (const auto& l : s.behavior.locals)
    if (rng.chance(0.6)) s.behavior.init_process.push_back(Assignment::local(l.name, random_expr(rng, scope, l.type, o.depth)));

  if (o.assumptions) {
    for (const auto& c : scope.inputs)
      if (rng.chance(0.3)) s.behavior.assumptions.push_back(MsgBoundAssumption{static_cast<std::size_t>(rng.uniform(1, 3)), c.name});
    if (rng.chance(0.2)) {
      GenScope asm_scope;
      for (const auto& p : s.params) asm_scope.values.push_back({p.name, p.type});
      for (const auto& c : scope.inputs) asm_scope.inputs.push_back(c);
      auto pred = random_expr(rng, asm_scope, MessageType::boolean(), 2);
      // Assumptions cannot read buffers; fall back to a literal.
      std::set<std::string> ft_reads, present_reads;
      collect_channel_reads(*pred, ft_reads, present_reads);
      bool reads_buffer = false;
      std::function<void(const Expr&)> scan = [&](const Expr& e) {
        std::visit(
            [&](const auto& n) {
              using T = std::decay_t<decltype(n)>;
              if constexpr (std::is_same_v<T, ast::BufRef>) reads_buffer = true;
              else if constexpr (std::is_same_v<T, ast::Unary>) scan(*n.operand);
              else if constexpr (std::is_same_v<T, ast::Binary>) {
                scan(*n.lhs);
                scan(*n.rhs);
              } else if constexpr (std::is_same_v<T, ast::Cond>) {
                scan(*n.cond);
                scan(*n.then_branch);
                scan(*n.else_branch);
              }
            },
            e.node);
      };
      scan(*pred);
      s.behavior.assumptions.push_back(PredicateAssumption{reads_buffer ? lit(Message(true)) : pred});
    }
  }

  s.behavior.pr_ending = random_expr(rng, scope, MessageType::boolean(), o.depth);
  s.behavior.pr_calc = random_assignments(rng, scope, s, o.depth, o.buffer_assignments);
  if (rng.chance(0.5)) s.behavior.pr_calc_f = random_assignments(rng, scope, s, o.depth, o.buffer_assignments);
  if (rng.chance(0.3)) s.declared_wcet = lit(Message(static_cast<std::int64_t>(rng.uniform(1, 9))));
  return std::make_shared<const ElementaryProcessSpec>(std::move(s));
}

/// Random interval of `t`: empty with probability `p_empty`, else 1..max messages.
inline TimeInterval random_interval(Rng& rng, const MessageType& t, double p_empty, int max_msgs = 3) {
  if (rng.chance(p_empty)) return {};
  std::vector<Message> msgs;
  const int n = rng.uniform(1, max_msgs);
  for (int i = 0; i < n; ++i) msgs.push_back(random_value(rng, t));
  return TimeInterval(std::move(msgs));
}

/// Random inputs for every port of a component; the start port carries
/// at most one event per tick.
inline std::map<std::string, TimedStream> random_port_streams(Rng& rng, const Component& c, std::size_t horizon,
                                                              double start_rate = 0.2) {
  std::map<std::string, TimedStream> out;
  for (const auto& p : c.in_ports()) {
    TimedStream s(p.type, horizon);
    for (Tick t = 0; t < horizon; ++t)
      s.set(t, p.name == kStartPort ? (rng.chance(start_rate) ? event_interval() : TimeInterval{})
                                    : random_interval(rng, p.type, 0.5));
    out.emplace(p.name, std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random documents

inline ProcessExprPtr random_compose_expr(Rng& rng, const std::vector<std::shared_ptr<const ElementaryProcessSpec>>& procs,
                                          int depth) {
  if (depth <= 0 || rng.chance(0.25)) {
    const auto& p = rng.pick(procs);
    ParamValues args;
    for (const auto& prm : p->params)
      if (rng.chance(0.5)) args[prm.name] = random_value(rng, prm.type);
    return elem(p, std::move(args));
  }
  const int k = rng.uniform(0, 5);
  if (k == 4) {
    RestartPolicy policy{rng.chance(0.5), static_cast<Tick>(rng.uniform(1, 4))};
    return loop_manual(random_compose_expr(rng, procs, depth - 1), policy);
  }
  if (k == 5) return loop_auto(random_compose_expr(rng, procs, depth - 1), static_cast<Tick>(rng.uniform(1, 5)));
  auto l = random_compose_expr(rng, procs, depth - 1), r = random_compose_expr(rng, procs, depth - 1);
  if (k == 0) return seq(l, r);
  if (k == 1) return par(l, r);
  static const std::vector<ChooserPolicy> choosers{RoundRobin{}, FixedChoice{Branch::Left},
                                                   FixedChoice{Branch::Right}, SeededRandom{7},
                                                   SeededRandom{12345678901234ULL}};
  return alt(l, r, rng.pick(choosers));
}

inline dsl::SpecDocument random_document(Rng& rng) {
  dsl::SpecDocument doc;
  std::vector<std::shared_ptr<const ElementaryProcessSpec>> procs;
  const int n_proc = rng.uniform(1, 3);
  RandomSpecOptions o;
  o.buffer_assignments = true;
  for (int i = 0; i < n_proc; ++i) {
    procs.push_back(random_spec(rng, "P" + std::to_string(i), o));
    doc.processes.push_back({procs.back(), {}});
  }
  const int n_comp = rng.uniform(0, 3);
  for (int i = 0; i < n_comp; ++i) doc.compositions.push_back({"M" + std::to_string(i), random_compose_expr(rng, procs, 3), {}});
  const int n_env = rng.uniform(0, 2);
  for (int i = 0; i < n_env; ++i) {
    dsl::EnvDecl e;
    e.name = "E" + std::to_string(i);
    const int n = rng.uniform(0, 4);
    for (int k = 0; k < n; ++k) {
      dsl::EnvEntry en;
      en.channel = rng.chance(0.3) ? "entry" : "x" + std::to_string(rng.uniform(1, 3));
      const int ranges = rng.uniform(1, 3);
      for (int r = 0; r < ranges; ++r) {
        const Tick from = static_cast<Tick>(rng.uniform(0, 30));
        en.ticks.push_back({from, rng.chance(0.4) ? from + static_cast<Tick>(rng.uniform(1, 5)) : from});
      }
      const MessageType t = random_type(rng);
      const int m = rng.uniform(0, 2);
      for (int j = 0; j < m; ++j) en.interval.push_back(random_value(rng, t));
      e.entries.push_back(std::move(en));
    }
    doc.envs.push_back(std::move(e));
  }
  return doc;
}

}  // namespace procview::fixtures
