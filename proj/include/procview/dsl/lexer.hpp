#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procview/diagnostics.hpp"

namespace procview::dsl {

enum class Tok {
  Ident,
  Int,     // unsigned magnitude; a leading `-` is a separate token
  Symbol,  // #Name
  Keyword,
  Punct,
  End,
  Invalid,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;

  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool punct(std::string_view t) const { return is(Tok::Punct, t); }
  bool keyword(std::string_view t) const { return is(Tok::Keyword, t); }
};

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k{
      "process", "compose", "env",  "in",   "out",  "buf",  "init",  "initProcess", "asm",
      "ending",  "calc",    "calcF", "wcet", "loop", "if",   "then",  "else",        "true",
      "false",   "ev",      "ft",   "present", "msg", "enum"};
  return k;
}

/// Human-readable token description for diagnostics.
inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Int: return "integer " + t.text;
    case Tok::Symbol: return "symbol " + t.text;
    case Tok::Ident: return "identifier `" + t.text + "`";
    case Tok::Invalid: return "invalid character `" + t.text + "`";
    default: return "`" + t.text + "`";
  }
}

/// Splits .pspec text into tokens. `//` starts a comment running to the end
/// of the line. The ASCII alternate operator `(+)` is a single token.
inline std::vector<Token> lex(std::string_view src) {
  static const char* const kPuncts[] = {"(+)", "..", ":=", "<=", ">=", "==", "!=", "&&", "||", "(", ")",
                                        "{",   "}",  "[",  "]",  "<",  ">",  "=",  ":",  ";",  ",", "@",
                                        "+",   "-",  "*",  "/",  "%",  "!"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      const Tok k = keywords().count(word) ? Tok::Keyword : Tok::Ident;
      out.push_back({k, std::move(word), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (c == '#') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({j > i + 1 ? Tok::Symbol : Tok::Invalid, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      const std::string_view pv(p);
      if (src.substr(i, pv.size()) == pv) {
        out.push_back({Tok::Punct, std::string(pv), pos});
        advance(pv.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      out.push_back({Tok::Invalid, std::string(1, c), pos});
      advance(1);
    }
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

}  // namespace procview::dsl
