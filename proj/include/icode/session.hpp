#pragma once

// One interaction session run through the adaptation loop: collect, analyze,
// identify situations, plan, execute.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icode/analyzers.hpp"
#include "icode/config.hpp"
#include "icode/model.hpp"
#include "icode/planner.hpp"
#include "icode/situations.hpp"

namespace icode {

inline constexpr std::string_view kScaleBurst = "scale-burst";
inline constexpr std::string_view kBlackboxHeader = "icode-blackbox v1";

enum class RecordKind { Event, Detect, Situation, Directive, Reauth };
std::string_view to_string(RecordKind kind);

struct BlackboxRecord {
  std::int64_t rel_ms = 0;
  RecordKind kind = RecordKind::Event;
  std::string payload;

  std::string to_line() const;
  friend bool operator==(const BlackboxRecord&, const BlackboxRecord&) = default;
};

struct ReauthResult {
  bool ok = false;
  std::string principal;
};

struct SessionState {
  EventTrace trace;
  UIModel ui;
  SituationState situations;
  bool locked = false;
  std::optional<SituationId> lock_reason;
  bool pending_challenge = false;
  bool terminated = false;
  int failed_reauth = 0;
  std::vector<BlackboxRecord> blackbox;
};

/// Everything one call produced, in emission order.
struct StepOutput {
  std::vector<Detection> detections;  // KO detections seen for the first time
  std::vector<Situation> situations;  // newly declared
  std::vector<AdaptationDirective> directives;
};

/// A single serial session. Calls must be externally serialized; the object
/// may move between threads between calls.
class Session {
 public:
  explicit Session(EngineConfig cfg = {});

  /// Appends `e` (lenient time), analyzes the trace plus a synthetic
  /// button(Exit) terminator, updates situations, plans and applies
  /// directives. While locked the event is only recorded. A real button(Exit)
  /// ends the session. Throws SessionTerminated afterwards.
  StepOutput ingest(Event e);

  /// Throws NotLocked.
  StepOutput handle_reauth(const ReauthResult& r);
  /// Throws NoChallenge.
  StepOutput handle_challenge(bool passed);
  /// User asked to undo paging. Throws NotPaged; ignored while locked.
  StepOutput request_restore();
  /// Deadline watchdog for callers that own a clock in trace time.
  StepOutput tick(std::int64_t now_rel);

  const SessionState& state() const noexcept { return state_; }
  const EngineConfig& config() const noexcept { return cfg_; }
  bool locked() const noexcept { return state_.locked; }
  bool terminated() const noexcept { return state_.terminated; }

  std::string export_blackbox() const;

 private:
  void record(RecordKind kind, std::string payload);
  void record_at(std::int64_t rel, RecordKind kind, std::string payload);
  void emit(StepOutput& out, AdaptationDirective d);
  void declare(StepOutput& out, const Situation& s);
  void unlock(StepOutput& out);

  EngineConfig cfg_;
  SessionState state_;
  std::size_t analysis_origin_ = 0;
  std::set<std::pair<std::string, std::size_t>> seen_detections_;
  std::set<std::size_t> handled_scale_bursts_;
};

std::string format_detection(const Detection& d);
std::string format_situation(const Situation& s);

/// Event lines ("<event> @<raw>") of a blackbox document, in order.
std::vector<std::string> extract_event_lines(std::string_view blackbox);

struct ReplayResult {
  std::vector<AdaptationDirective> directives;
  Session session;
};

/// Re-drives a fresh session with the events, re-auth/challenge outcomes and
/// user restores recorded in a blackbox document.
ReplayResult replay_blackbox(std::string_view blackbox, const EngineConfig& cfg);

}  // namespace icode
