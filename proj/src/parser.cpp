#include "icode/parser.hpp"

#include <charconv>
#include <limits>
#include <system_error>

#include "icode/error.hpp"
#include "icode/kernels.hpp"

namespace icode {
namespace {

struct Failure {
  std::size_t pos;
  std::string expected;
};

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == text_.size(); }

  bool consume(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) != lit) return false;
    pos_ += lit.size();
    return true;
  }

  void expect(std::string_view lit) {
    if (!consume(lit)) fail("\"" + std::string(lit) + "\"");
  }

  std::int64_t integer() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    if (end < text_.size() && text_[end] == '-') ++end;
    const std::size_t digits = end;
    while (end < text_.size() && is_digit(text_[end])) ++end;
    if (end == digits) fail("integer");
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (ec != std::errc{}) fail("integer within 64-bit range");
    pos_ = end;
    return value;
  }

  double decimal() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    const auto digit_run = [&] {
      const std::size_t from = end;
      while (end < text_.size() && is_digit(text_[end])) ++end;
      return end > from;
    };
    if (!digit_run()) fail("decimal digits");
    if (end >= text_.size() || text_[end] != '.') {
      pos_ = end;
      fail("\".\"");
    }
    ++end;
    if (!digit_run()) {
      pos_ = end;
      fail("decimal digits");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (ec != std::errc{}) fail("decimal");
    pos_ = end;
    return value;
  }

  /// One or more characters up to the next space.
  std::string_view word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ') ++pos_;
    if (pos_ == start) fail("non-space text");
    return text_.substr(start, pos_ - start);
  }

  /// Zero or more characters up to the next single quote.
  std::string_view quoted_body() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\'') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  [[noreturn]] void fail(std::string expected) const { throw Failure{pos_, std::move(expected)}; }
  [[noreturn]] void fail_at(std::size_t pos, std::string expected) const { throw Failure{pos, std::move(expected)}; }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Event parse_event_body(Cursor& in) {
  if (in.consume("entry(")) {
    EventKind kind;
    if (in.consume("Ins")) {
      kind = EventKind::EntryInsert;
    } else if (in.consume("Del")) {
      kind = EventKind::EntryDelete;
    } else if (in.consume("Focus")) {
      kind = EventKind::EntryFocus;
    } else {
      in.fail("\"Ins\", \"Del\" or \"Focus\"");
    }
    in.expect(") ");
    std::string vtype(in.word());
    in.expect(" '");
    std::string changed(in.quoted_body());
    in.expect("' ");
    const std::size_t index_pos = in.pos();
    const std::int64_t index = in.integer();
    if (kind == EventKind::EntryFocus && index != -1) in.fail_at(index_pos, "index -1 for a focus event");
    if (kind != EventKind::EntryFocus && index < 0) in.fail_at(index_pos, "non-negative character index");
    return Event{kind, EntryPayload{std::move(vtype), std::move(changed), index}, {}};
  }
  if (in.consume("button(")) {
    EventKind kind;
    if (in.consume("Pressed")) {
      kind = EventKind::ButtonPressed;
    } else if (in.consume("Exit")) {
      kind = EventKind::ButtonExit;
    } else {
      in.fail("\"Pressed\" or \"Exit\"");
    }
    in.expect(")");
    return Event{kind, std::monostate{}, {}};
  }
  if (in.consume("Scale(")) {
    const std::int64_t value = in.integer();
    in.expect(")");
    return Event::scale(value, {});
  }
  if (in.consume("yscroll(")) {
    const std::size_t value_pos = in.pos();
    const double value = in.decimal();
    if (value > 1.0) in.fail_at(value_pos, "fraction in [0,1]");
    in.expect(")");
    return Event::yscroll(value, {});
  }
  in.fail("\"entry(\", \"button(\", \"Scale(\" or \"yscroll(\"");
}

/// Best-effort recovery of the " @<int>" suffix of a malformed line.
Timestamp salvage_time(std::string_view line) {
  const auto at = line.rfind(" @");
  if (at == std::string_view::npos) return {};
  const std::string_view digits = line.substr(at + 2);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return {};
  return Timestamp{value};
}

}  // namespace

std::string Diagnostic::to_string() const {
  std::string out = "line " + std::to_string(line_no);
  if (column > 0) out += ", column " + std::to_string(column);
  out += severity == Severity::Error ? ": error: " : ": warning: ";
  out += message;
  return out;
}

ParseOutcome parse_line(std::string_view line, std::size_t line_no, ParseMode mode) {
  Cursor in(line);
  try {
    Event e = parse_event_body(in);
    in.expect(" @");
    e.raw_time = Timestamp{in.integer()};
    if (!in.at_end()) in.fail("end of line");
    return ParseOutcome{std::move(e), std::nullopt, line_no};
  } catch (const Failure& f) {
    Diagnostic d{line_no, f.pos + 1, Diagnostic::Severity::Error, "expected " + f.expected};
    if (mode == ParseMode::Strict) throw Error(ErrorCode::MalformedLine, d.to_string());
    return ParseOutcome{Event::error(salvage_time(line)), std::move(d), line_no};
  }
}

std::string format_event_body(const Event& e) {
  switch (e.kind) {
    case EventKind::EntryInsert:
    case EventKind::EntryDelete:
    case EventKind::EntryFocus: {
      if (!well_formed(e)) throw Error(ErrorCode::Unserializable, "entry payload violates its invariants");
      const EntryPayload& p = *e.entry();
      if (p.vtype.empty()) throw Error(ErrorCode::Unserializable, "empty vtype");
      for (char c : p.vtype) {
        if (c == ' ' || c == '\n') throw Error(ErrorCode::Unserializable, "vtype contains a space or newline");
      }
      for (char c : p.changed) {
        if (c == '\'' || c == '\n') throw Error(ErrorCode::Unserializable, "changed text contains a quote or newline");
      }
      const char* tag = e.kind == EventKind::EntryInsert ? "Ins" : e.kind == EventKind::EntryDelete ? "Del" : "Focus";
      return std::string("entry(") + tag + ") " + p.vtype + " '" + p.changed + "' " + std::to_string(p.index);
    }
    case EventKind::ButtonPressed:
      return "button(Pressed)";
    case EventKind::ButtonExit:
      return "button(Exit)";
    case EventKind::Scale:
      if (!well_formed(e)) throw Error(ErrorCode::Unserializable, "scale event without a value");
      return "Scale(" + std::to_string(std::get<ScaleValue>(e.payload).value) + ")";
    case EventKind::YScroll: {
      if (!well_formed(e)) throw Error(ErrorCode::Unserializable, "yscroll fraction outside [0,1]");
      // Shortest fixed-notation text that reads back to the same double.
      char buf[64];
      const double v = std::get<ScrollFraction>(e.payload).value;
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
      std::string text(buf, ptr);
      if (text.find('.') == std::string::npos) text += ".0";
      return "yscroll(" + text + ")";
    }
    case EventKind::Error:
      break;
  }
  throw Error(ErrorCode::Unserializable, "error events have no textual form");
}

std::string format_event(const Event& e) {
  return format_event_body(e) + " @" + std::to_string(e.raw_time.millis);
}

StreamResult assemble_stream(std::span<const ParseOutcome> outcomes, ParseMode mode) {
  StreamResult out;
  const TimeMode time_mode = mode == ParseMode::Strict ? TimeMode::Strict : TimeMode::Lenient;
  for (const ParseOutcome& o : outcomes) {
    if (o.diagnostic) {
      if (mode == ParseMode::Strict) throw Error(ErrorCode::MalformedLine, o.diagnostic->to_string());
      out.diagnostics.push_back(*o.diagnostic);
    }
    Event e = *o.event;
    if (e.kind == EventKind::Error && !out.trace.empty()) {
      e.raw_time = Timestamp{out.trace.epoch().millis + out.trace.last_rel_time()};
    }
    try {
      if (out.trace.append(std::move(e), time_mode) == AppendStatus::Clamped) {
        out.diagnostics.push_back({o.line_no, 0, Diagnostic::Severity::Warning,
                                   "timestamp earlier than previous event; clamped"});
      }
    } catch (const Error& err) {
      throw Error(err.code(), "line " + std::to_string(o.line_no) + ": " + err.what());
    }
  }
  return out;
}

StreamResult parse_stream(std::span<const std::string> lines, ParseMode mode) {
  const auto outcomes = parse_lines(lines, mode, lines.size() >= kParallelParseThreshold ? Exec::Parallel : Exec::Serial);
  return assemble_stream(outcomes, mode);
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace icode
