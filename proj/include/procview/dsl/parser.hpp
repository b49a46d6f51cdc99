#pragma once

#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procview/dsl/document.hpp"
#include "procview/dsl/lexer.hpp"
#include "procview/simulation.hpp"

namespace procview::dsl {

struct ParseResult {
  SpecDocument doc;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

struct SyntaxFailure {
  Diagnostic diag;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  SpecDocument document() {
    SpecDocument doc;
    while (!at_end()) {
      if (peek().keyword("process")) doc.processes.push_back(process());
      else if (peek().keyword("compose")) doc.compositions.push_back(compose());
      else if (peek().keyword("env")) doc.envs.push_back(env());
      else fail({"process", "compose", "env", "end of input"});
    }
    return doc;
  }

 private:
  // -- token plumbing ------------------------------------------------------
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(std::vector<std::string> expected, std::string message = {}) const {
    const Token& t = peek();
    if (message.empty()) message = "unexpected " + describe(t);
    throw SyntaxFailure{{DiagKind::SyntaxError, t.text, context_, std::move(message), t.pos, std::move(expected)}};
  }

  bool accept_punct(std::string_view p) {
    if (!peek().punct(p)) return false;
    ++pos_;
    return true;
  }
  bool accept_keyword(std::string_view k) {
    if (!peek().keyword(k)) return false;
    ++pos_;
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail({"`" + std::string(p) + "`"});
  }
  void expect_keyword(std::string_view k) {
    if (!accept_keyword(k)) fail({"`" + std::string(k) + "`"});
  }
  std::string ident(const char* what = "identifier") {
    if (peek().kind != Tok::Ident) fail({what});
    return take().text;
  }
  bool at_word(std::string_view w) const { return peek().is(Tok::Ident, w); }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail({"`" + std::string(w) + "`"});
    ++pos_;
  }

  std::uint64_t unsigned_int() {
    if (peek().kind != Tok::Int) fail({"integer"});
    const Token t = take();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
      --pos_;
      fail({"integer"}, "integer " + t.text + " is out of range");
    }
    return v;
  }

  std::int64_t signed_int() {
    const bool neg = accept_punct("-");
    const std::size_t at = pos_;
    const std::uint64_t mag = unsigned_int();
    const std::uint64_t limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + (neg ? 1 : 0);
    if (mag > limit) {
      pos_ = at;
      fail({"integer"}, "integer is out of range");
    }
    return neg ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
  }

  // -- literals and types --------------------------------------------------
  Message literal() {
    const Token& t = peek();
    if (t.keyword("true")) return ++pos_, Message(true);
    if (t.keyword("false")) return ++pos_, Message(false);
    if (t.keyword("ev")) return ++pos_, Message::event();
    if (t.kind == Tok::Symbol) return ++pos_, Message(Symbol{t.text.substr(1)});
    if (t.kind == Tok::Int || t.punct("-")) return Message(signed_int());
    fail({"literal"});
  }

  MessageType type() {
    if (accept_keyword("enum")) {
      expect_punct("(");
      std::vector<std::string> syms{ident("symbol name")};
      while (accept_punct(",")) syms.push_back(ident("symbol name"));
      expect_punct(")");
      return MessageType::enumeration(std::move(syms));
    }
    if (at_word("Event")) return ++pos_, MessageType::event();
    if (at_word("Int")) return ++pos_, MessageType::integer();
    if (at_word("Bool")) return ++pos_, MessageType::boolean();
    fail({"Event", "Int", "Bool", "enum"});
  }

  // -- expressions ---------------------------------------------------------
  ExprPtr expr() {
    if (accept_keyword("if")) {
      ExprPtr c = expr();
      expect_keyword("then");
      ExprPtr a = expr();
      expect_keyword("else");
      ExprPtr b = expr();
      return cond(std::move(c), std::move(a), std::move(b));
    }
    return binary_level(1);
  }

  std::optional<BinaryOp> binary_op_at(int level) const {
    static const std::map<std::string, BinaryOp, std::less<>> ops{
        {"||", BinaryOp::Or}, {"&&", BinaryOp::And}, {"<", BinaryOp::Lt}, {"<=", BinaryOp::Le},
        {">", BinaryOp::Gt},  {">=", BinaryOp::Ge},  {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne},
        {"+", BinaryOp::Add}, {"-", BinaryOp::Sub},  {"*", BinaryOp::Mul}, {"/", BinaryOp::Div},
        {"%", BinaryOp::Mod}};
    if (peek().kind != Tok::Punct) return std::nullopt;
    auto it = ops.find(peek().text);
    if (it == ops.end() || precedence(it->second) != level) return std::nullopt;
    return it->second;
  }

  ExprPtr binary_level(int level) {
    if (level > 5) return unary_expr();
    ExprPtr lhs = binary_level(level + 1);
    if (level == 3) {
      // Comparisons do not chain.
      if (auto op = binary_op_at(3)) {
        ++pos_;
        lhs = binary(*op, std::move(lhs), binary_level(4));
        if (binary_op_at(3)) fail({}, "comparisons cannot be chained; add parentheses");
      }
      return lhs;
    }
    while (auto op = binary_op_at(level)) {
      ++pos_;
      lhs = binary(*op, std::move(lhs), binary_level(level + 1));
    }
    return lhs;
  }

  ExprPtr unary_expr() {
    if (peek().punct("-") && peek(1).kind == Tok::Int) return lit(Message(signed_int()));
    if (accept_punct("-")) return unary(UnaryOp::Neg, unary_expr());
    if (accept_punct("!")) return unary(UnaryOp::Not, unary_expr());
    return primary();
  }

  std::string channel_arg() {
    expect_punct("(");
    std::string ch = ident("channel name");
    expect_punct(")");
    return ch;
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (accept_keyword("ft")) return ft_of(channel_arg());
    if (accept_keyword("present")) return present(channel_arg());
    if (accept_keyword("buf")) return buf(channel_arg());
    if (t.kind == Tok::Ident) return ref(take().text);
    if (accept_punct("(")) {
      ExprPtr e = expr();
      expect_punct(")");
      return e;
    }
    if (t.kind == Tok::Int || t.kind == Tok::Symbol || t.keyword("true") || t.keyword("false") || t.keyword("ev"))
      return lit(literal());
    fail({"expression"});
  }

  // -- process blocks ------------------------------------------------------
  std::vector<Assignment> assignments(const std::set<std::string>& outputs) {
    std::vector<Assignment> out;
    while (peek().kind == Tok::Ident || peek().keyword("buf")) {
      if (accept_keyword("buf")) {
        std::string ch = channel_arg();
        expect_punct(":=");
        out.push_back(Assignment::buffer(std::move(ch), expr()));
      } else {
        std::string target = take().text;
        expect_punct(":=");
        if (outputs.count(target)) {
          expect_punct("<");
          std::vector<ExprPtr> elems;
          if (!peek().punct(">")) {
            elems.push_back(binary_level(4));
            while (accept_punct(",")) elems.push_back(binary_level(4));
          }
          expect_punct(">");
          out.push_back(Assignment::output(std::move(target), std::move(elems)));
        } else {
          out.push_back(Assignment::local(std::move(target), expr()));
        }
      }
      expect_punct(";");
    }
    return out;
  }

  ProcessDecl process() {
    const SourcePos at = peek().pos;
    expect_keyword("process");
    ElementaryProcessSpec s;
    s.name = ident("process name");
    context_ = "process " + s.name;
    expect_punct("(");
    if (!peek().punct(")")) {
      do {
        ParamDecl p;
        p.name = ident("parameter name");
        expect_punct(":");
        p.type = type();
        expect_punct("=");
        p.value = literal();
        s.params.push_back(std::move(p));
      } while (accept_punct(","));
    }
    expect_punct(")");
    expect_punct("{");

    std::set<std::string> outputs;
    while (peek().keyword("in") || peek().keyword("out")) {
      const Direction d = take().text == "in" ? Direction::Input : Direction::Output;
      ChannelDecl c;
      c.name = ident("channel name");
      c.direction = d;
      expect_punct(":");
      c.type = type();
      expect_punct(";");
      if (d == Direction::Output) outputs.insert(c.name);
      s.channels.push_back(std::move(c));
    }
    while (accept_keyword("buf")) {
      BufferDecl b;
      b.channel = ident("channel name");
      expect_punct("=");
      b.init = literal();
      expect_punct(";");
      s.buffers.push_back(std::move(b));
    }
    auto& beh = s.behavior;
    while (accept_keyword("init")) {
      LocalDecl l;
      l.name = ident("local name");
      expect_punct(":");
      l.type = type();
      expect_punct("=");
      l.init = literal();
      expect_punct(";");
      beh.locals.push_back(std::move(l));
    }
    while (accept_keyword("initProcess")) {
      std::string target = ident("local name");
      expect_punct(":=");
      beh.init_process.push_back(Assignment::local(std::move(target), expr()));
      expect_punct(";");
    }
    while (accept_keyword("asm")) {
      if (accept_keyword("msg")) {
        expect_punct("(");
        const std::uint64_t n = unsigned_int();
        expect_punct(",");
        std::string ch = ident("channel name");
        expect_punct(")");
        beh.assumptions.push_back(MsgBoundAssumption{static_cast<std::size_t>(n), std::move(ch)});
      } else {
        beh.assumptions.push_back(PredicateAssumption{expr()});
      }
      expect_punct(";");
    }
    if (!peek().keyword("ending"))
      fail({"in", "out", "buf", "init", "initProcess", "asm", "ending"}, "missing `ending:` clause");
    ++pos_;
    expect_punct(":");
    beh.pr_ending = expr();
    expect_punct(";");
    if (!peek().keyword("calc")) fail({"calc"}, "missing `calc:` clause");
    ++pos_;
    expect_punct(":");
    beh.pr_calc = assignments(outputs);
    if (accept_keyword("calcF")) {
      expect_punct(":");
      beh.pr_calc_f = assignments(outputs);
    }
    if (accept_keyword("wcet")) {
      expect_punct(":");
      s.declared_wcet = expr();
      expect_punct(";");
    }
    if (!accept_punct("}")) fail({"assignment", "calcF", "wcet", "`}`"});
    context_.clear();
    return {std::make_shared<const ElementaryProcessSpec>(std::move(s)), at};
  }

  // -- compositions --------------------------------------------------------
  ProcessExprPtr comp_expr(int level) {
    if (level == 3) return comp_unary();
    ProcessExprPtr lhs = comp_expr(level + 1);
    for (;;) {
      if (level == 2 && accept_punct(";")) {
        lhs = seq(std::move(lhs), comp_expr(3));
      } else if (level == 1 && accept_punct("||")) {
        lhs = par(std::move(lhs), comp_expr(2));
      } else if (level == 1 && accept_punct("(+)")) {
        ChooserPolicy chooser = RoundRobin{};
        if (accept_punct("[")) {
          if (at_word("rr")) ++pos_;
          else if (at_word("left")) ++pos_, chooser = FixedChoice{Branch::Left};
          else if (at_word("right")) ++pos_, chooser = FixedChoice{Branch::Right};
          else if (at_word("random")) ++pos_, chooser = SeededRandom{unsigned_int()};
          else fail({"rr", "left", "right", "random"});
          expect_punct("]");
        }
        lhs = alt(std::move(lhs), comp_expr(2), chooser);
      } else {
        return lhs;
      }
    }
  }

  ProcessExprPtr comp_unary() {
    if (accept_keyword("loop")) {
      expect_punct("(");
      if (at_word("auto")) {
        ++pos_;
        const std::size_t at = pos_;
        const std::uint64_t d = unsigned_int();
        if (d < 1) {
          pos_ = at;
          fail({"delay >= 1"}, "loop delay must be at least one tick");
        }
        expect_punct(")");
        return loop_auto(comp_unary(), static_cast<Tick>(d));
      }
      if (at_word("manual")) {
        ++pos_;
        RestartPolicy policy;
        if (at_word("restart")) {
          ++pos_;
          expect_punct("=");
          if (accept_keyword("true")) policy.allow_restart_while_running = true;
          else if (accept_keyword("false")) policy.allow_restart_while_running = false;
          else fail({"true", "false"});
        }
        if (at_word("gap")) {
          ++pos_;
          expect_punct("=");
          const std::size_t at = pos_;
          const std::uint64_t g = unsigned_int();
          if (g < 1) {
            pos_ = at;
            fail({"gap >= 1"}, "restart gap must be at least one tick");
          }
          policy.min_gap_ticks = static_cast<Tick>(g);
        }
        expect_punct(")");
        return loop_manual(comp_unary(), policy);
      }
      fail({"auto", "manual"});
    }
    if (accept_punct("(")) {
      ProcessExprPtr e = comp_expr(1);
      expect_punct(")");
      return e;
    }
    const SourcePos at = peek().pos;
    pexpr::Elem leaf;
    leaf.name = ident("process name");
    if (accept_punct("(")) {
      if (!peek().punct(")")) {
        do {
          std::string k = ident("parameter name");
          expect_punct("=");
          leaf.args[k] = literal();
        } while (accept_punct(","));
      }
      expect_punct(")");
    }
    auto e = std::make_shared<const ProcessExpr>(ProcessExpr{std::move(leaf)});
    leaf_pos_[e.get()] = at;
    return e;
  }

  ComposeDecl compose() {
    const SourcePos at = peek().pos;
    expect_keyword("compose");
    ComposeDecl c;
    c.name = ident("composition name");
    context_ = "compose " + c.name;
    c.pos = at;
    expect_punct("=");
    c.expr = comp_expr(1);
    context_.clear();
    return c;
  }

  // -- environments --------------------------------------------------------
  EnvDecl env() {
    EnvDecl e;
    e.pos = peek().pos;
    expect_keyword("env");
    e.name = ident("environment name");
    context_ = "env " + e.name;
    expect_punct("{");
    while (!accept_punct("}")) {
      EnvEntry en;
      en.pos = peek().pos;
      en.channel = ident("channel name or `}`");
      expect_punct("@");
      do {
        TickRange r;
        r.from = r.to = static_cast<Tick>(unsigned_int());
        if (accept_punct("..")) {
          const std::size_t at = pos_;
          r.to = static_cast<Tick>(unsigned_int());
          if (r.to < r.from) {
            pos_ = at;
            fail({"tick >= " + std::to_string(r.from)}, "empty tick range");
          }
        }
        en.ticks.push_back(r);
      } while (accept_punct(","));
      expect_punct("=");
      expect_punct("<");
      if (!peek().punct(">")) {
        en.interval.push_back(literal());
        while (accept_punct(",")) en.interval.push_back(literal());
      }
      expect_punct(">");
      expect_punct(";");
      e.entries.push_back(std::move(en));
    }
    context_.clear();
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string context_;

 public:
  std::map<const ProcessExpr*, SourcePos> leaf_pos_;
};

// Rebuilds a composition tree with every leaf bound to its process spec.
inline ProcessExprPtr resolve(const ProcessExprPtr& e, const SpecDocument& doc,
                              const std::map<const ProcessExpr*, SourcePos>& positions, const std::string& where,
                              std::vector<Diagnostic>& diags) {
  return std::visit(
      [&](const auto& n) -> ProcessExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, pexpr::Elem>) {
          auto it = positions.find(e.get());
          const SourcePos pos = it == positions.end() ? SourcePos{} : it->second;
          auto spec = doc.process_ptr(n.name);
          if (!spec) {
            diags.push_back({DiagKind::UnresolvedReference, n.name, where, "no process named " + n.name, pos, {}});
            return e;
          }
          for (const auto& [k, v] : n.args) {
            const auto p = std::find_if(spec->params.begin(), spec->params.end(),
                                        [&](const ParamDecl& d) { return d.name == k; });
            if (p == spec->params.end())
              diags.push_back({DiagKind::UnresolvedReference, k, where, n.name + " has no parameter " + k, pos, {}});
            else if (!conforms(v, p->type))
              diags.push_back({DiagKind::TypeError, k, where,
                               "argument " + to_string(v, MessageStyle::Source) + " does not conform to " +
                                   to_string(p->type),
                               pos, {}});
          }
          return std::make_shared<const ProcessExpr>(ProcessExpr{pexpr::Elem{n.name, spec, n.args}});
        } else if constexpr (std::is_same_v<T, pexpr::Seq>) {
          return seq(resolve(n.left, doc, positions, where, diags), resolve(n.right, doc, positions, where, diags));
        } else if constexpr (std::is_same_v<T, pexpr::Par>) {
          return par(resolve(n.left, doc, positions, where, diags), resolve(n.right, doc, positions, where, diags));
        } else if constexpr (std::is_same_v<T, pexpr::Alt>) {
          return alt(resolve(n.left, doc, positions, where, diags), resolve(n.right, doc, positions, where, diags),
                     n.chooser);
        } else if constexpr (std::is_same_v<T, pexpr::LoopAuto>) {
          return loop_auto(resolve(n.body, doc, positions, where, diags), n.delay);
        } else {
          return loop_manual(resolve(n.body, doc, positions, where, diags), n.policy);
        }
      },
      e->node);
}

template <class Decls, class NameOf>
void check_unique(const Decls& decls, NameOf name_of, const char* what, std::vector<Diagnostic>& diags) {
  std::set<std::string> seen;
  for (const auto& d : decls) {
    const std::string& n = name_of(d);
    if (!seen.insert(n).second)
      diags.push_back({DiagKind::DuplicateName, n, "", std::string(what) + " " + n + " is declared twice", d.pos, {}});
  }
}

}  // namespace detail

/// Parses .pspec text, resolves process references and validates every
/// process. Syntax errors stop parsing; the remaining checks all report.
/// Type mismatches found by validation are reported as TypeError.
inline ParseResult parse(std::string_view text) {
  ParseResult r;
  detail::Parser p(text);
  try {
    r.doc = p.document();
  } catch (const detail::SyntaxFailure& f) {
    r.diagnostics.push_back(f.diag);
    return r;
  }

  detail::check_unique(r.doc.processes, [](const ProcessDecl& d) -> const std::string& { return d.spec->name; },
                       "process", r.diagnostics);
  detail::check_unique(r.doc.compositions, [](const ComposeDecl& d) -> const std::string& { return d.name; },
                       "composition", r.diagnostics);
  detail::check_unique(r.doc.envs, [](const EnvDecl& d) -> const std::string& { return d.name; }, "environment",
                       r.diagnostics);

  for (const auto& proc : r.doc.processes)
    for (Diagnostic d : validate(*proc.spec)) {
      if (d.kind == DiagKind::TypeMismatch) d.kind = DiagKind::TypeError;
      d.pos = proc.pos;
      r.diagnostics.push_back(std::move(d));
    }
  for (auto& c : r.doc.compositions)
    c.expr = detail::resolve(c.expr, r.doc, p.leaf_pos_, "compose " + c.name, r.diagnostics);
  return r;
}

/// Environment streams for a compiled network. Channel `entry` names the
/// network's entry channel unless a channel of that name exists. Later
/// entries for the same channel and tick replace earlier ones. Entries for
/// channels the network does not read from the environment are skipped and
/// described in `ignored` when given, otherwise rejected.
inline EnvInputs to_env_inputs(const EnvDecl& decl, const Network& n, std::size_t horizon,
                               std::vector<std::string>* ignored = nullptr) {
  EnvInputs given;
  auto skip = [&](const std::string& why) {
    if (!ignored) throw Error(ErrorCode::UnknownChannel, "env " + decl.name + ": " + why);
    ignored->push_back("env " + decl.name + ": " + why + "; entry ignored");
  };
  for (const auto& en : decl.entries) {
    std::string ch = en.channel;
    if (ch == "entry" && !n.channels().count(ch)) {
      if (!n.entry()) {
        skip("`entry` used but the composition has no entry point");
        continue;
      }
      ch = *n.entry();
    }
    if (!n.channels().count(ch) || n.channel(ch).driver) {
      skip(ch + " is not an external input");
      continue;
    }
    const MessageType& t = n.channel(ch).type;
    for (const auto& m : en.interval)
      if (!conforms(m, t))
        throw Error(ErrorCode::TypeMismatch, "env " + decl.name + ": " + to_string(m, MessageStyle::Source) +
                                                 " does not conform to " + ch + ": " + to_string(t));
    auto it = given.find(ch);
    if (it == given.end()) it = given.emplace(ch, TimedStream(t, horizon)).first;
    for (const auto& r : en.ticks)
      for (Tick k = r.from; k <= r.to && k < horizon; ++k) it->second.set(k, TimeInterval(en.interval));
  }
  return complete_env(n, horizon, std::move(given));
}

}  // namespace procview::dsl
