#include "icode/situations.hpp"

#include <algorithm>
#include <string>

#include "icode/error.hpp"

namespace icode {
namespace {

void merge_evidence(std::vector<Detection>& into, const Detection& d) {
  auto same = std::find_if(into.begin(), into.end(), [&](const Detection& e) {
    return e.detector == d.detector && e.span.start == d.span.start;
  });
  if (same == into.end()) {
    into.push_back(d);
  } else {
    *same = d;
  }
}

bool is_superhuman(const Detection& d, const SituationConfig& cfg) {
  return d.detector == kFastEntry && d.verdict == Verdict::KO && d.metrics.gradient_ms_per_char &&
         *d.metrics.gradient_ms_per_char < cfg.s2_superhuman_ms;
}

}  // namespace

std::string_view to_string(SituationId id) {
  switch (id) {
    case SituationId::S1_UserChanged: return "S1_UserChanged";
    case SituationId::S2_BotTakeover: return "S2_BotTakeover";
    case SituationId::PerfFailure: return "PerfFailure";
  }
  return "?";
}

std::optional<SituationId> situation_from_string(std::string_view text) {
  for (auto id : {SituationId::S1_UserChanged, SituationId::S2_BotTakeover, SituationId::PerfFailure}) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

void SituationConfig::validate(double fastest_avg_entry_ms) const {
  if (s1_consecutive_ko < 1) throw Error(ErrorCode::InvalidConfig, "s1_consecutive_ko must be >= 1");
  if (s2_consecutive_fast < 1) throw Error(ErrorCode::InvalidConfig, "s2_consecutive_fast must be >= 1");
  if (perf_deadline_ms < 1) throw Error(ErrorCode::InvalidConfig, "perf_deadline_ms must be >= 1");
  if (!(s2_superhuman_ms < fastest_avg_entry_ms)) {
    throw Error(ErrorCode::InvalidConfig, "s2_superhuman_ms must be below fastest_avg_entry_ms");
  }
}

bool SituationState::is_active(SituationId id) const { return find(id) != nullptr; }

const Situation* SituationState::find(SituationId id) const {
  auto it = std::find_if(active_situations.begin(), active_situations.end(),
                         [&](const Situation& s) { return s.id == id; });
  return it == active_situations.end() ? nullptr : &*it;
}

SituationUpdate update(const SituationState& state, const AnalysisReport& report, std::int64_t now,
                       const SituationConfig& cfg) {
  if (now < state.last_event_rel_time) {
    throw Error(ErrorCode::OutOfOrder, "situation update at " + std::to_string(now) + " precedes " +
                                           std::to_string(state.last_event_rel_time));
  }
  SituationUpdate out{state, {}};
  SituationState& s = out.state;
  s.last_event_rel_time = now;

  if (report.ko_count > 0) {
    ++s.consecutive_ko_analyses;
    for (const Detection& d : report.detections) {
      if (d.verdict == Verdict::KO) merge_evidence(s.ko_streak_evidence, d);
    }
  } else {
    s.consecutive_ko_analyses = 0;
    s.ko_streak_evidence.clear();
  }

  const bool superhuman = report.ko_count > 0 &&
                          std::any_of(report.detections.begin(), report.detections.end(),
                                      [&](const Detection& d) { return is_superhuman(d, cfg); });
  if (superhuman) {
    ++s.consecutive_superhuman_bursts;
    for (const Detection& d : report.detections) {
      if (is_superhuman(d, cfg)) merge_evidence(s.superhuman_streak_evidence, d);
    }
  } else {
    s.consecutive_superhuman_bursts = 0;
    s.superhuman_streak_evidence.clear();
  }

  const bool s2_due = s.consecutive_superhuman_bursts == cfg.s2_consecutive_fast &&
                      !s.is_active(SituationId::S2_BotTakeover);
  const bool s1_due = s.consecutive_ko_analyses == cfg.s1_consecutive_ko &&
                      !s.is_active(SituationId::S1_UserChanged);
  if (s2_due) {
    Situation sit{SituationId::S2_BotTakeover, now, s.superhuman_streak_evidence, true};
    s.active_situations.push_back(sit);
    out.declared.push_back(std::move(sit));
  } else if (s1_due) {
    Situation sit{SituationId::S1_UserChanged, now, s.ko_streak_evidence, true};
    s.active_situations.push_back(sit);
    out.declared.push_back(std::move(sit));
  }
  return out;
}

std::optional<Situation> check_deadline(const SituationState& state, std::int64_t now, const SituationConfig& cfg) {
  if (!state.response_expected || state.is_active(SituationId::PerfFailure)) return std::nullopt;
  if (now - state.last_event_rel_time > cfg.perf_deadline_ms) {
    return Situation{SituationId::PerfFailure, now, {}, true};
  }
  return std::nullopt;
}

SituationState activate(const SituationState& state, Situation s) {
  SituationState out = state;
  if (!out.is_active(s.id)) {
    s.active = true;
    out.active_situations.push_back(std::move(s));
  }
  return out;
}

SituationState clear(const SituationState& state, SituationId id) {
  if (!state.is_active(id)) throw Error(ErrorCode::NotActive, std::string(to_string(id)));
  SituationState out = state;
  std::erase_if(out.active_situations, [&](const Situation& s) { return s.id == id; });
  switch (id) {
    case SituationId::S1_UserChanged:
      out.consecutive_ko_analyses = 0;
      out.ko_streak_evidence.clear();
      break;
    case SituationId::S2_BotTakeover:
      out.consecutive_superhuman_bursts = 0;
      out.superhuman_streak_evidence.clear();
      break;
    case SituationId::PerfFailure:
      break;
  }
  return out;
}

}  // namespace icode
