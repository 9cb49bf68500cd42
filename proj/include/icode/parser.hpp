#pragma once

// Textual iCode: one event per line, "<event> @<millis>".
//
//   entry(Ins|Del|Focus) <vtype> '<text>' <index> @<t>
//   button(Pressed|Exit) @<t>
//   Scale(<int>) @<t>
//   yscroll(<digits>.<digits>) @<t>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icode/model.hpp"

namespace icode {

enum class ParseMode {
  Strict,    // first malformed line or out-of-order time throws
  Recovery,  // malformed lines become Error events, times are clamped
};

struct Diagnostic {
  enum class Severity { Error, Warning };

  std::size_t line_no = 0;  // 1-based
  std::size_t column = 0;   // 1-based, 0 when not position-specific
  Severity severity = Severity::Error;
  std::string message;

  std::string to_string() const;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseOutcome {
  std::optional<Event> event;
  std::optional<Diagnostic> diagnostic;
  std::size_t line_no = 0;

  bool ok() const { return event.has_value() && !diagnostic.has_value(); }
  friend bool operator==(const ParseOutcome&, const ParseOutcome&) = default;
};

/// Parses one line. On malformed input Strict mode throws MalformedLine;
/// Recovery mode returns an Error event (timed from a salvageable " @<int>"
/// suffix, else 0) together with the diagnostic.
ParseOutcome parse_line(std::string_view line, std::size_t line_no, ParseMode mode = ParseMode::Strict);

/// Canonical text of `e` without the trailing newline. Throws Unserializable
/// for Error events and for payloads the grammar cannot carry.
std::string format_event(const Event& e);

/// Canonical text of the event part only, i.e. without " @<millis>".
std::string format_event_body(const Event& e);

struct StreamResult {
  EventTrace trace;
  std::vector<Diagnostic> diagnostics;
};

/// Parses and appends every line. In Recovery mode no line is dropped: each
/// malformed line becomes an Error event stamped at the trace position where
/// it occurred.
StreamResult parse_stream(std::span<const std::string> lines, ParseMode mode = ParseMode::Strict);

/// Folds already-parsed outcomes into a trace with parse_stream's rules.
StreamResult assemble_stream(std::span<const ParseOutcome> outcomes, ParseMode mode);

/// Splits a document on '\n'; a trailing newline does not yield an empty line.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace icode
