#pragma once

// Event vocabulary and the normalized trace every analysis runs over.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace icode {

struct Timestamp {
  std::int64_t millis = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

enum class EventKind {
  EntryInsert,
  EntryDelete,
  EntryFocus,
  ButtonPressed,
  ButtonExit,
  Scale,
  YScroll,
  Error,
};

/// The alphabet the detectors scan.
enum class ActionCategory { Entry, Button, Scale, YScroll, Error };

std::string_view to_string(EventKind kind);
std::string_view to_string(ActionCategory category);

struct EntryPayload {
  std::string vtype;    // validation condition reported by the toolkit
  std::string changed;  // inserted/deleted characters; empty for focus
  std::int64_t index = -1;

  friend bool operator==(const EntryPayload&, const EntryPayload&) = default;
};

struct ScaleValue {
  std::int64_t value = 0;
  friend bool operator==(const ScaleValue&, const ScaleValue&) = default;
};

struct ScrollFraction {
  double value = 0.0;  // in [0, 1]
  friend bool operator==(const ScrollFraction&, const ScrollFraction&) = default;
};

using Payload = std::variant<std::monostate, EntryPayload, ScaleValue, ScrollFraction>;

/// One atomic UI action. Build through the factories so the payload always
/// matches the kind.
struct Event {
  EventKind kind = EventKind::Error;
  Payload payload;
  Timestamp raw_time;

  static Event entry_insert(std::string vtype, std::string changed, std::int64_t index, Timestamp t);
  static Event entry_delete(std::string vtype, std::string changed, std::int64_t index, Timestamp t);
  static Event entry_focus(std::string vtype, Timestamp t);
  static Event button_pressed(Timestamp t);
  static Event button_exit(Timestamp t);
  static Event scale(std::int64_t value, Timestamp t);
  static Event yscroll(double fraction, Timestamp t);
  static Event error(Timestamp t);

  const EntryPayload* entry() const { return std::get_if<EntryPayload>(&payload); }

  friend bool operator==(const Event&, const Event&) = default;
};

/// True when the payload shape is the one `kind` requires.
bool well_formed(const Event& e);

ActionCategory category(const Event& e);
ActionCategory category(EventKind kind);

enum class TimeMode {
  Strict,   // out-of-order timestamps are an error
  Lenient,  // clamped to the previous time, reported as Clamped
};

enum class AppendStatus { Appended, Clamped };

/// Ordered events with times relative to the first event.
///
/// Invariants: events and rel_times have equal length, rel_times[0] == 0,
/// rel_times is nondecreasing and rel_times[i] == events[i].raw_time - epoch.
class EventTrace {
 public:
  EventTrace() = default;

  /// Appends `e`; the first event fixes the epoch whatever its raw value.
  /// Strict mode throws OutOfOrder when `e` precedes the last event. Lenient
  /// mode moves `e` forward to the last time and returns Clamped.
  AppendStatus append(Event e, TimeMode mode = TimeMode::Strict);

  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  const std::vector<Event>& events() const noexcept { return events_; }
  const std::vector<std::int64_t>& rel_times() const noexcept { return rel_times_; }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  std::int64_t rel_time(std::size_t i) const { return rel_times_[i]; }
  Timestamp epoch() const noexcept { return epoch_; }

  /// rel time of the last event, 0 when empty.
  std::int64_t last_rel_time() const noexcept { return rel_times_.empty() ? 0 : rel_times_.back(); }

  /// Copy of events [first, size()) re-based on events[first].
  EventTrace suffix(std::size_t first) const;

  /// Checks every structural invariant; used by tests.
  bool invariants_hold() const;

  friend bool operator==(const EventTrace&, const EventTrace&) = default;

 private:
  std::vector<Event> events_;
  std::vector<std::int64_t> rel_times_;
  Timestamp epoch_;
};

}  // namespace icode
