#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace procview {

enum class DiagKind {
  // Spec validation
  DuplicateName,
  ReservedName,
  MissingBuffer,
  DuplicateBuffer,
  UnknownBufferChannel,
  UnresolvedSymbol,
  TypeMismatch,
  InvalidTarget,
  DuplicateAssignment,
  // Parsing
  SyntaxError,
  UnresolvedReference,
  TypeError,
  // Composition / scheduling surfaced by `check`
  CompileError,
};

inline std::string_view to_string(DiagKind k) {
  switch (k) {
    case DiagKind::DuplicateName: return "DuplicateName";
    case DiagKind::ReservedName: return "ReservedName";
    case DiagKind::MissingBuffer: return "MissingBuffer";
    case DiagKind::DuplicateBuffer: return "DuplicateBuffer";
    case DiagKind::UnknownBufferChannel: return "UnknownBufferChannel";
    case DiagKind::UnresolvedSymbol: return "UnresolvedSymbol";
    case DiagKind::TypeMismatch: return "TypeMismatch";
    case DiagKind::InvalidTarget: return "InvalidTarget";
    case DiagKind::DuplicateAssignment: return "DuplicateAssignment";
    case DiagKind::SyntaxError: return "SyntaxError";
    case DiagKind::UnresolvedReference: return "UnresolvedReference";
    case DiagKind::TypeError: return "TypeError";
    case DiagKind::CompileError: return "CompileError";
  }
  return "Unknown";
}

struct SourcePos {
  int line = 0;  // 1-based; 0 when not from source text
  int column = 0;
};

struct Diagnostic {
  DiagKind kind;
  std::string subject;   // the offending name, e.g. `x` for MissingBuffer(x)
  std::string location;  // e.g. `process Adder / calc`
  std::string message;
  SourcePos pos;
  std::vector<std::string> expected;  // syntax errors only
};

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  if (d.pos.line > 0) os << d.pos.line << ':' << d.pos.column << ": ";
  os << "error[" << to_string(d.kind) << "]";
  if (!d.subject.empty()) os << '(' << d.subject << ')';
  if (!d.location.empty()) os << " in " << d.location;
  os << ": " << d.message;
  if (!d.expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < d.expected.size(); ++i) os << (i ? ", " : "") << d.expected[i];
    os << ')';
  }
  return os;
}

}  // namespace procview
