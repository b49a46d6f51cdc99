#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "procview/error.hpp"
#include "procview/message.hpp"
#include "procview/stream.hpp"

namespace procview {

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ast {
struct Literal {
  Message value;
};
/// Parameter or local variable.
struct Ref {
  std::string name;
};
/// Current value of the one-element buffer of an input channel.
struct BufRef {
  std::string channel;
};
/// First message of the current interval of an input channel; falls back
/// to the channel's buffer when the interval is empty.
struct Ft {
  std::string channel;
};
/// Whether the current interval of an input channel is nonempty.
struct Present {
  std::string channel;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Cond {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;
};
}  // namespace ast

struct Expr {
  std::variant<ast::Literal, ast::Ref, ast::BufRef, ast::Ft, ast::Present, ast::Unary,
               ast::Binary, ast::Cond>
      node;
};

// Constructors.
inline ExprPtr lit(Message m) { return std::make_shared<const Expr>(Expr{ast::Literal{std::move(m)}}); }
inline ExprPtr ref(std::string name) { return std::make_shared<const Expr>(Expr{ast::Ref{std::move(name)}}); }
inline ExprPtr buf(std::string ch) { return std::make_shared<const Expr>(Expr{ast::BufRef{std::move(ch)}}); }
inline ExprPtr ft_of(std::string ch) { return std::make_shared<const Expr>(Expr{ast::Ft{std::move(ch)}}); }
inline ExprPtr present(std::string ch) { return std::make_shared<const Expr>(Expr{ast::Present{std::move(ch)}}); }
inline ExprPtr unary(UnaryOp op, ExprPtr e) {
  return std::make_shared<const Expr>(Expr{ast::Unary{op, std::move(e)}});
}
inline ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r) {
  return std::make_shared<const Expr>(Expr{ast::Binary{op, std::move(l), std::move(r)}});
}
inline ExprPtr cond(ExprPtr c, ExprPtr a, ExprPtr b) {
  return std::make_shared<const Expr>(Expr{ast::Cond{std::move(c), std::move(a), std::move(b)}});
}

bool equal(const ExprPtr& a, const ExprPtr& b);

namespace detail {
template <class T>
bool node_equal(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, ast::Literal>) return a.value == b.value;
  else if constexpr (std::is_same_v<T, ast::Ref>) return a.name == b.name;
  else if constexpr (std::is_same_v<T, ast::BufRef> || std::is_same_v<T, ast::Ft> ||
                     std::is_same_v<T, ast::Present>)
    return a.channel == b.channel;
  else if constexpr (std::is_same_v<T, ast::Unary>)
    return a.op == b.op && equal(a.operand, b.operand);
  else if constexpr (std::is_same_v<T, ast::Binary>)
    return a.op == b.op && equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
  else
    return equal(a.cond, b.cond) && equal(a.then_branch, b.then_branch) &&
           equal(a.else_branch, b.else_branch);
}
}  // namespace detail

/// Deep structural equality.
inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return detail::node_equal(x, std::get<T>(b->node));
      },
      a->node);
}

inline bool is_comparison(BinaryOp op) {
  return op == BinaryOp::Lt || op == BinaryOp::Le || op == BinaryOp::Gt || op == BinaryOp::Ge ||
         op == BinaryOp::Eq || op == BinaryOp::Ne;
}
inline bool is_arithmetic(BinaryOp op) {
  return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul ||
         op == BinaryOp::Div || op == BinaryOp::Mod;
}

/// Binding strength used by the parser and printer. Higher binds tighter.
inline int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge:
    case BinaryOp::Eq: case BinaryOp::Ne: return 3;
    case BinaryOp::Add: case BinaryOp::Sub: return 4;
    case BinaryOp::Mul: case BinaryOp::Div: case BinaryOp::Mod: return 5;
  }
  return 0;
}

inline const char* spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

namespace detail {
inline int node_precedence(const Expr& e) {
  if (const auto* b = std::get_if<ast::Binary>(&e.node)) return precedence(b->op);
  if (std::holds_alternative<ast::Cond>(e.node)) return 0;
  if (const auto* l = std::get_if<ast::Literal>(&e.node))
    if (l->value.is_int() && l->value.as_int() < 0) return 6;
  return 7;
}

inline void print_expr(const Expr& e, std::string& out);

inline void print_operand(const ExprPtr& e, int min_prec, std::string& out) {
  if (node_precedence(*e) < min_prec) {
    out += '(';
    print_expr(*e, out);
    out += ')';
  } else {
    print_expr(*e, out);
  }
}

inline void print_expr(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Literal>) {
          out += to_string(n.value, MessageStyle::Source);
        } else if constexpr (std::is_same_v<T, ast::Ref>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, ast::BufRef>) {
          out += "buf(" + n.channel + ")";
        } else if constexpr (std::is_same_v<T, ast::Ft>) {
          out += "ft(" + n.channel + ")";
        } else if constexpr (std::is_same_v<T, ast::Present>) {
          out += "present(" + n.channel + ")";
        } else if constexpr (std::is_same_v<T, ast::Unary>) {
          out += n.op == UnaryOp::Neg ? "-" : "!";
          // `-5` would re-read as a negative literal, so literal operands
          // are always parenthesised.
          print_operand(n.operand, std::holds_alternative<ast::Literal>(n.operand->node) ? 8 : 6,
                        out);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          const int p = precedence(n.op);
          const bool cmp = is_comparison(n.op);
          print_operand(n.lhs, cmp ? p + 1 : p, out);
          out += ' ';
          out += spelling(n.op);
          out += ' ';
          print_operand(n.rhs, p + 1, out);
        } else {
          out += "if ";
          print_expr(*n.cond, out);
          out += " then ";
          print_expr(*n.then_branch, out);
          out += " else ";
          print_expr(*n.else_branch, out);
        }
      },
      e.node);
}
}  // namespace detail

/// Renders an expression in .pspec surface syntax. Conditionals nested as
/// operands are parenthesised; `min_prec` lets callers demand tighter
/// binding for the outermost node.
inline std::string to_source(const ExprPtr& e, int min_prec = 0) {
  std::string out;
  detail::print_operand(e, min_prec, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Name resolution for evaluation. Null maps are treated as empty.
struct EvalScope {
  const std::map<std::string, Message>* params = nullptr;
  const std::map<std::string, Message>* locals = nullptr;
  const std::map<std::string, Message>* buffers = nullptr;
  const PortValues* inputs = nullptr;
};

namespace detail {
inline const Message* find_in(const std::map<std::string, Message>* m, const std::string& k) {
  if (!m) return nullptr;
  auto it = m->find(k);
  return it == m->end() ? nullptr : &it->second;
}

inline std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

inline Message arith(BinaryOp op, std::int64_t a, std::int64_t b) {
  const auto ua = static_cast<std::uint64_t>(a);
  const auto ub = static_cast<std::uint64_t>(b);
  switch (op) {
    case BinaryOp::Add: return Message(wrap(ua + ub));
    case BinaryOp::Sub: return Message(wrap(ua - ub));
    case BinaryOp::Mul: return Message(wrap(ua * ub));
    case BinaryOp::Div:
      if (b == 0) return Message(std::int64_t{0});
      if (b == -1) return Message(wrap(0 - ua));
      return Message(a / b);
    case BinaryOp::Mod:
      if (b == 0 || b == -1) return Message(std::int64_t{0});
      return Message(a % b);
    default: break;
  }
  throw Error(ErrorCode::EvalError, "not an arithmetic operator");
}
}  // namespace detail

/// Evaluates a well-typed expression. Arithmetic wraps on overflow and
/// division or remainder by zero yields 0, so evaluation is total.
inline Message eval(const Expr& e, const EvalScope& scope) {
  return std::visit(
      [&](const auto& n) -> Message {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Literal>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, ast::Ref>) {
          if (const auto* v = detail::find_in(scope.locals, n.name)) return *v;
          if (const auto* v = detail::find_in(scope.params, n.name)) return *v;
          throw Error(ErrorCode::EvalError, "unbound name " + n.name);
        } else if constexpr (std::is_same_v<T, ast::BufRef>) {
          if (const auto* v = detail::find_in(scope.buffers, n.channel)) return *v;
          throw Error(ErrorCode::EvalError, "no buffer for " + n.channel);
        } else if constexpr (std::is_same_v<T, ast::Ft>) {
          if (scope.inputs) {
            auto it = scope.inputs->find(n.channel);
            if (it != scope.inputs->end() && !it->second.empty()) return ft(it->second);
          }
          if (const auto* v = detail::find_in(scope.buffers, n.channel)) return *v;
          throw Error(ErrorCode::NoFirstElement, "ft(" + n.channel + ") on an empty interval");
        } else if constexpr (std::is_same_v<T, ast::Present>) {
          if (!scope.inputs) return Message(false);
          auto it = scope.inputs->find(n.channel);
          return Message(it != scope.inputs->end() && !it->second.empty());
        } else if constexpr (std::is_same_v<T, ast::Unary>) {
          const Message v = eval(*n.operand, scope);
          if (n.op == UnaryOp::Not) return Message(!v.as_bool());
          return Message(detail::wrap(0 - static_cast<std::uint64_t>(v.as_int())));
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          if (n.op == BinaryOp::And) {
            return Message(eval(*n.lhs, scope).as_bool() && eval(*n.rhs, scope).as_bool());
          }
          if (n.op == BinaryOp::Or) {
            return Message(eval(*n.lhs, scope).as_bool() || eval(*n.rhs, scope).as_bool());
          }
          const Message a = eval(*n.lhs, scope);
          const Message b = eval(*n.rhs, scope);
          if (is_arithmetic(n.op)) return detail::arith(n.op, a.as_int(), b.as_int());
          switch (n.op) {
            case BinaryOp::Eq: return Message(a == b);
            case BinaryOp::Ne: return Message(a != b);
            case BinaryOp::Lt: return Message(a.as_int() < b.as_int());
            case BinaryOp::Le: return Message(a.as_int() <= b.as_int());
            case BinaryOp::Gt: return Message(a.as_int() > b.as_int());
            case BinaryOp::Ge: return Message(a.as_int() >= b.as_int());
            default: break;
          }
          throw Error(ErrorCode::EvalError, "bad binary operator");
        } else {
          return eval(*n.cond, scope).as_bool() ? eval(*n.then_branch, scope)
                                                : eval(*n.else_branch, scope);
        }
      },
      e.node);
}

/// Channels read via ft() or present() anywhere in the expression.
inline void collect_channel_reads(const Expr& e, std::set<std::string>& ft_reads,
                                  std::set<std::string>& present_reads) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Ft>) ft_reads.insert(n.channel);
        else if constexpr (std::is_same_v<T, ast::Present>) present_reads.insert(n.channel);
        else if constexpr (std::is_same_v<T, ast::Unary>)
          collect_channel_reads(*n.operand, ft_reads, present_reads);
        else if constexpr (std::is_same_v<T, ast::Binary>) {
          collect_channel_reads(*n.lhs, ft_reads, present_reads);
          collect_channel_reads(*n.rhs, ft_reads, present_reads);
        } else if constexpr (std::is_same_v<T, ast::Cond>) {
          collect_channel_reads(*n.cond, ft_reads, present_reads);
          collect_channel_reads(*n.then_branch, ft_reads, present_reads);
          collect_channel_reads(*n.else_branch, ft_reads, present_reads);
        }
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Typing

/// What a name may denote inside an expression.
struct TypeScope {
  std::map<std::string, MessageType> values;    // params and locals
  std::map<std::string, MessageType> buffers;   // by input channel
  std::map<std::string, MessageType> channels;  // readable inputs
};

struct TypeIssue {
  enum class Kind { UnresolvedSymbol, TypeMismatch } kind;
  std::string subject;
  std::string message;
};

/// Enum values are assignable to any enum that contains all their symbols.
inline bool assignable(const MessageType& value, const MessageType& target) {
  if (value.kind != target.kind) return false;
  if (value.kind != TypeKind::Enum) return true;
  for (const auto& s : value.symbols)
    if (!target.has_symbol(s)) return false;
  return true;
}

namespace detail {
inline MessageType join_enum(const MessageType& a, const MessageType& b) {
  MessageType out = a;
  for (const auto& s : b.symbols)
    if (!out.has_symbol(s)) out.symbols.push_back(s);
  return out;
}
}  // namespace detail

/// Infers the type of an expression, appending problems to `issues`.
/// Returns nullopt if the type cannot be determined.
inline std::optional<MessageType> infer(const Expr& e, const TypeScope& scope,
                                        std::vector<TypeIssue>& issues) {
  using K = TypeIssue::Kind;
  auto mismatch = [&](const std::string& what) {
    issues.push_back({K::TypeMismatch, to_source(std::make_shared<const Expr>(e)), what});
    return std::optional<MessageType>{};
  };
  return std::visit(
      [&](const auto& n) -> std::optional<MessageType> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Literal>) {
          if (n.value.is_symbol()) return MessageType::enumeration({n.value.as_symbol()});
          return MessageType{n.value.kind(), {}};
        } else if constexpr (std::is_same_v<T, ast::Ref>) {
          auto it = scope.values.find(n.name);
          if (it == scope.values.end()) {
            const bool is_channel = scope.channels.count(n.name) != 0;
            issues.push_back({K::UnresolvedSymbol, n.name,
                              is_channel ? "channel " + n.name + " must be read via ft() or present()"
                                         : "unknown symbol " + n.name});
            return std::nullopt;
          }
          return it->second;
        } else if constexpr (std::is_same_v<T, ast::BufRef>) {
          auto it = scope.buffers.find(n.channel);
          if (it == scope.buffers.end()) {
            issues.push_back({K::UnresolvedSymbol, n.channel, "no buffer for " + n.channel});
            return std::nullopt;
          }
          return it->second;
        } else if constexpr (std::is_same_v<T, ast::Ft> || std::is_same_v<T, ast::Present>) {
          auto it = scope.channels.find(n.channel);
          if (it == scope.channels.end()) {
            issues.push_back({K::UnresolvedSymbol, n.channel, "unknown input channel " + n.channel});
            return std::nullopt;
          }
          if constexpr (std::is_same_v<T, ast::Present>) return MessageType::boolean();
          else return it->second;
        } else if constexpr (std::is_same_v<T, ast::Unary>) {
          auto t = infer(*n.operand, scope, issues);
          if (!t) return std::nullopt;
          const auto want = n.op == UnaryOp::Neg ? TypeKind::Int : TypeKind::Bool;
          if (t->kind != want) return mismatch("operand of unary operator has type " + to_string(*t));
          return t;
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          auto l = infer(*n.lhs, scope, issues);
          auto r = infer(*n.rhs, scope, issues);
          if (!l || !r) return std::nullopt;
          if (n.op == BinaryOp::And || n.op == BinaryOp::Or) {
            if (l->kind != TypeKind::Bool || r->kind != TypeKind::Bool)
              return mismatch(std::string("operands of ") + spelling(n.op) + " must be Bool");
            return MessageType::boolean();
          }
          if (n.op == BinaryOp::Eq || n.op == BinaryOp::Ne) {
            if (l->kind != r->kind)
              return mismatch("cannot compare " + to_string(*l) + " with " + to_string(*r));
            return MessageType::boolean();
          }
          if (l->kind != TypeKind::Int || r->kind != TypeKind::Int)
            return mismatch(std::string("operands of ") + spelling(n.op) + " must be Int");
          return is_comparison(n.op) ? MessageType::boolean() : MessageType::integer();
        } else {
          auto c = infer(*n.cond, scope, issues);
          auto a = infer(*n.then_branch, scope, issues);
          auto b = infer(*n.else_branch, scope, issues);
          if (!c || !a || !b) return std::nullopt;
          if (c->kind != TypeKind::Bool) return mismatch("condition must be Bool");
          if (a->kind != b->kind)
            return mismatch("branches have types " + to_string(*a) + " and " + to_string(*b));
          if (a->kind == TypeKind::Enum) return detail::join_enum(*a, *b);
          return a;
        }
      },
      e.node);
}

}  // namespace procview
