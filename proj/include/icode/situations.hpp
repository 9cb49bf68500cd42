#pragma once

// Counting rules that lift per-snapshot analysis reports to high-level
// situations (user changed, bot takeover, performance failure).

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "icode/analyzers.hpp"

namespace icode {

enum class SituationId { S1_UserChanged, S2_BotTakeover, PerfFailure };

std::string_view to_string(SituationId id);
std::optional<SituationId> situation_from_string(std::string_view text);

struct Situation {
  SituationId id = SituationId::S1_UserChanged;
  std::int64_t onset = 0;  // rel ms of the event that completed the rule
  std::vector<Detection> evidence;
  bool active = true;
  friend bool operator==(const Situation&, const Situation&) = default;
};

struct SituationConfig {
  int s1_consecutive_ko = 3;
  int s2_consecutive_fast = 3;
  double s2_superhuman_ms = 100.0;
  std::int64_t perf_deadline_ms = 10000;

  /// Throws InvalidConfig on non-positive counts/deadline or when the
  /// superhuman threshold is not below `fastest_avg_entry_ms`.
  void validate(double fastest_avg_entry_ms) const;
  friend bool operator==(const SituationConfig&, const SituationConfig&) = default;
};

struct SituationState {
  int consecutive_ko_analyses = 0;
  int consecutive_superhuman_bursts = 0;
  std::int64_t last_event_rel_time = 0;
  bool response_expected = false;
  std::vector<Situation> active_situations;
  // KO detections of the current streaks, one per (detector, span start).
  std::vector<Detection> ko_streak_evidence;
  std::vector<Detection> superhuman_streak_evidence;

  bool is_active(SituationId id) const;
  const Situation* find(SituationId id) const;
  friend bool operator==(const SituationState&, const SituationState&) = default;
};

struct SituationUpdate {
  SituationState state;
  std::vector<Situation> declared;
};

/// Folds one analysis report into the counters and declares S1/S2 when a
/// streak reaches its configured length. Simultaneous S1 and S2 declare S2
/// only. Already-active situations are never re-declared. Throws OutOfOrder
/// when `now` precedes the last seen event.
SituationUpdate update(const SituationState& state, const AnalysisReport& report, std::int64_t now,
                       const SituationConfig& cfg);

/// PerfFailure when a response is expected and more than perf_deadline_ms
/// passed since the last event; none when PerfFailure is already active.
std::optional<Situation> check_deadline(const SituationState& state, std::int64_t now, const SituationConfig& cfg);

/// Adds `s` to the active set (no-op if that id is already active).
SituationState activate(const SituationState& state, Situation s);

/// Deactivates `id` and resets the counters that feed it. Throws NotActive.
SituationState clear(const SituationState& state, SituationId id);

}  // namespace icode
