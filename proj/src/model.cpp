#include "icode/model.hpp"

#include <string>
#include <utility>

#include "icode/error.hpp"

namespace icode {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfOrder: return "OutOfOrder";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::Unserializable: return "Unserializable";
    case ErrorCode::UnknownDetector: return "UnknownDetector";
    case ErrorCode::NotActive: return "NotActive";
    case ErrorCode::UnknownWidget: return "UnknownWidget";
    case ErrorCode::NotPaged: return "NotPaged";
    case ErrorCode::SessionTerminated: return "SessionTerminated";
    case ErrorCode::NotLocked: return "NotLocked";
    case ErrorCode::NoChallenge: return "NoChallenge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::EntryInsert: return "EntryInsert";
    case EventKind::EntryDelete: return "EntryDelete";
    case EventKind::EntryFocus: return "EntryFocus";
    case EventKind::ButtonPressed: return "ButtonPressed";
    case EventKind::ButtonExit: return "ButtonExit";
    case EventKind::Scale: return "Scale";
    case EventKind::YScroll: return "YScroll";
    case EventKind::Error: return "Error";
  }
  return "Unknown";
}

std::string_view to_string(ActionCategory category) {
  switch (category) {
    case ActionCategory::Entry: return "ENTRY";
    case ActionCategory::Button: return "BUTTON";
    case ActionCategory::Scale: return "SCALE";
    case ActionCategory::YScroll: return "YSCROLL";
    case ActionCategory::Error: return "ERROR";
  }
  return "UNKNOWN";
}

Event Event::entry_insert(std::string vtype, std::string changed, std::int64_t index, Timestamp t) {
  return {EventKind::EntryInsert, EntryPayload{std::move(vtype), std::move(changed), index}, t};
}

Event Event::entry_delete(std::string vtype, std::string changed, std::int64_t index, Timestamp t) {
  return {EventKind::EntryDelete, EntryPayload{std::move(vtype), std::move(changed), index}, t};
}

Event Event::entry_focus(std::string vtype, Timestamp t) {
  return {EventKind::EntryFocus, EntryPayload{std::move(vtype), "", -1}, t};
}

Event Event::button_pressed(Timestamp t) { return {EventKind::ButtonPressed, std::monostate{}, t}; }
Event Event::button_exit(Timestamp t) { return {EventKind::ButtonExit, std::monostate{}, t}; }
Event Event::scale(std::int64_t value, Timestamp t) { return {EventKind::Scale, ScaleValue{value}, t}; }
Event Event::yscroll(double fraction, Timestamp t) { return {EventKind::YScroll, ScrollFraction{fraction}, t}; }
Event Event::error(Timestamp t) { return {EventKind::Error, std::monostate{}, t}; }

bool well_formed(const Event& e) {
  switch (e.kind) {
    case EventKind::EntryInsert:
    case EventKind::EntryDelete:
    case EventKind::EntryFocus: {
      const auto* p = e.entry();
      if (p == nullptr) return false;
      return e.kind == EventKind::EntryFocus ? p->index == -1 : p->index >= 0;
    }
    case EventKind::ButtonPressed:
    case EventKind::ButtonExit:
    case EventKind::Error:
      return std::holds_alternative<std::monostate>(e.payload);
    case EventKind::Scale:
      return std::holds_alternative<ScaleValue>(e.payload);
    case EventKind::YScroll: {
      const auto* f = std::get_if<ScrollFraction>(&e.payload);
      return f != nullptr && f->value >= 0.0 && f->value <= 1.0;
    }
  }
  return false;
}

ActionCategory category(EventKind kind) {
  switch (kind) {
    case EventKind::EntryInsert:
    case EventKind::EntryDelete:
    case EventKind::EntryFocus:
      return ActionCategory::Entry;
    case EventKind::ButtonPressed:
    case EventKind::ButtonExit:
      return ActionCategory::Button;
    case EventKind::Scale:
      return ActionCategory::Scale;
    case EventKind::YScroll:
      return ActionCategory::YScroll;
    case EventKind::Error:
      return ActionCategory::Error;
  }
  return ActionCategory::Error;
}

ActionCategory category(const Event& e) { return category(e.kind); }

AppendStatus EventTrace::append(Event e, TimeMode mode) {
  if (events_.empty()) {
    epoch_ = e.raw_time;
    rel_times_.push_back(0);
    events_.push_back(std::move(e));
    return AppendStatus::Appended;
  }
  const std::int64_t rel = e.raw_time.millis - epoch_.millis;
  const std::int64_t last = rel_times_.back();
  if (rel < last) {
    if (mode == TimeMode::Strict) {
      throw Error(ErrorCode::OutOfOrder, "event at " + std::to_string(e.raw_time.millis) +
                                             " precedes previous event at " +
                                             std::to_string(epoch_.millis + last));
    }
    e.raw_time.millis = epoch_.millis + last;
    rel_times_.push_back(last);
    events_.push_back(std::move(e));
    return AppendStatus::Clamped;
  }
  rel_times_.push_back(rel);
  events_.push_back(std::move(e));
  return AppendStatus::Appended;
}

EventTrace EventTrace::suffix(std::size_t first) const {
  EventTrace out;
  for (std::size_t i = first; i < events_.size(); ++i) out.append(events_[i], TimeMode::Lenient);
  return out;
}

bool EventTrace::invariants_hold() const {
  if (events_.size() != rel_times_.size()) return false;
  if (events_.empty()) return true;
  if (rel_times_.front() != 0) return false;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (i > 0 && rel_times_[i] < rel_times_[i - 1]) return false;
    if (rel_times_[i] != events_[i].raw_time.millis - epoch_.millis) return false;
  }
  return true;
}

}  // namespace icode
