#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "procview/error.hpp"

namespace procview {

/// The single element of type Event.
struct Event {
  auto operator<=>(const Event&) const = default;
};

/// A member of a user enumeration, e.g. `#Idle`.
struct Symbol {
  std::string name;
  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

enum class TypeKind { Event, Int, Bool, Enum };

/// Message-type tag carried by every channel, buffer, local and parameter.
/// Enumerations are structural: two enum types are equal iff their symbol
/// lists are equal.
struct MessageType {
  TypeKind kind = TypeKind::Event;
  std::vector<std::string> symbols;

  static MessageType event() { return {TypeKind::Event, {}}; }
  static MessageType integer() { return {TypeKind::Int, {}}; }
  static MessageType boolean() { return {TypeKind::Bool, {}}; }
  static MessageType enumeration(std::vector<std::string> symbols) {
    return {TypeKind::Enum, std::move(symbols)};
  }

  bool has_symbol(const std::string& s) const {
    return std::find(symbols.begin(), symbols.end(), s) != symbols.end();
  }

  friend bool operator==(const MessageType&, const MessageType&) = default;
};

inline std::string to_string(const MessageType& t) {
  switch (t.kind) {
    case TypeKind::Event: return "Event";
    case TypeKind::Int: return "Int";
    case TypeKind::Bool: return "Bool";
    case TypeKind::Enum: {
      std::string out = "enum(";
      for (std::size_t i = 0; i < t.symbols.size(); ++i) {
        if (i) out += ", ";
        out += t.symbols[i];
      }
      return out + ")";
    }
  }
  return "?";
}

class Message {
 public:
  using Value = std::variant<Event, std::int64_t, bool, Symbol>;

  Message() : value_(Event{}) {}
  Message(Event e) : value_(e) {}
  Message(std::int64_t v) : value_(v) {}
  Message(int v) : value_(static_cast<std::int64_t>(v)) {}
  Message(bool v) : value_(v) {}
  Message(Symbol s) : value_(std::move(s)) {}

  static Message event() { return Message(Event{}); }
  static Message symbol(std::string name) { return Message(Symbol{std::move(name)}); }

  bool is_event() const { return std::holds_alternative<Event>(value_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_bool() const { return std::holds_alternative<bool>(value_); }
  bool is_symbol() const { return std::holds_alternative<Symbol>(value_); }

  std::int64_t as_int() const {
    if (!is_int()) throw Error(ErrorCode::TypeMismatch, "message is not an Int");
    return std::get<std::int64_t>(value_);
  }
  bool as_bool() const {
    if (!is_bool()) throw Error(ErrorCode::TypeMismatch, "message is not a Bool");
    return std::get<bool>(value_);
  }
  const std::string& as_symbol() const {
    if (!is_symbol()) throw Error(ErrorCode::TypeMismatch, "message is not a symbol");
    return std::get<Symbol>(value_).name;
  }

  TypeKind kind() const {
    switch (value_.index()) {
      case 0: return TypeKind::Event;
      case 1: return TypeKind::Int;
      case 2: return TypeKind::Bool;
      default: return TypeKind::Enum;
    }
  }

  const Value& value() const { return value_; }

  friend bool operator==(const Message&, const Message&) = default;
  friend auto operator<=>(const Message&, const Message&) = default;

 private:
  Value value_;
};

inline bool conforms(const Message& m, const MessageType& t) {
  if (m.kind() != t.kind) return false;
  return t.kind != TypeKind::Enum || t.has_symbol(m.as_symbol());
}

/// Default value of a type (used for once-only defaults in generated specs).
inline Message default_value(const MessageType& t) {
  switch (t.kind) {
    case TypeKind::Event: return Message::event();
    case TypeKind::Int: return Message(std::int64_t{0});
    case TypeKind::Bool: return Message(false);
    case TypeKind::Enum:
      if (t.symbols.empty()) throw Error(ErrorCode::TypeMismatch, "empty enumeration");
      return Message::symbol(t.symbols.front());
  }
  return Message::event();
}

enum class MessageStyle {
  Trace,  // √ for events
  Source  // `ev` for events, as written in .pspec files
};

inline std::string to_string(const Message& m, MessageStyle style = MessageStyle::Trace) {
  switch (m.kind()) {
    case TypeKind::Event: return style == MessageStyle::Trace ? "√" : "ev";
    case TypeKind::Int: return std::to_string(m.as_int());
    case TypeKind::Bool: return m.as_bool() ? "true" : "false";
    case TypeKind::Enum: return "#" + m.as_symbol();
  }
  return "?";
}

}  // namespace procview
