#include "icode/session.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "icode/error.hpp"
#include "icode/parser.hpp"

namespace icode {
namespace {

std::string event_text(const Event& e) {
  if (e.kind == EventKind::Error) return "error @" + std::to_string(e.raw_time.millis);
  return format_event(e);
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

bool is_geometry(const AdaptationDirective& d) {
  return std::holds_alternative<directive::Resize>(d) || std::holds_alternative<directive::Reorient>(d) ||
         std::holds_alternative<directive::Page>(d) || std::holds_alternative<directive::Hide>(d);
}

/// Value of `key=` inside a space separated key=value payload.
std::optional<std::string> field(std::string_view payload, std::string_view key) {
  std::size_t pos = 0;
  while (pos < payload.size()) {
    const auto end = std::min(payload.find(' ', pos), payload.size());
    const std::string_view token = payload.substr(pos, end - pos);
    if (token.size() > key.size() && token.substr(0, key.size()) == key && token[key.size()] == '=') {
      return std::string(token.substr(key.size() + 1));
    }
    pos = end + 1;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::Event: return "EVENT";
    case RecordKind::Detect: return "DETECT";
    case RecordKind::Situation: return "SITUATION";
    case RecordKind::Directive: return "DIRECTIVE";
    case RecordKind::Reauth: return "REAUTH";
  }
  return "?";
}

std::string BlackboxRecord::to_line() const {
  return std::to_string(rel_ms) + " " + std::string(to_string(kind)) + " " + payload;
}

std::string format_detection(const Detection& d) {
  std::string out = "detector=" + d.detector + " verdict=" + std::string(to_string(d.verdict)) +
                    " start=" + std::to_string(d.span.start) + " end=" + std::to_string(d.span.end);
  if (d.metrics.run_length) out += " run_length=" + std::to_string(*d.metrics.run_length);
  if (d.metrics.burst_duration_ms) out += " duration=" + std::to_string(*d.metrics.burst_duration_ms);
  if (d.metrics.gradient_ms_per_char) out += " gradient=" + fixed3(*d.metrics.gradient_ms_per_char);
  return out;
}

std::string format_situation(const Situation& s) {
  return "id=" + std::string(to_string(s.id)) + " onset=" + std::to_string(s.onset) +
         " evidence=" + std::to_string(s.evidence.size());
}

Session::Session(EngineConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  state_.ui = UIModel::demo(cfg_.context);
}

void Session::record_at(std::int64_t rel, RecordKind kind, std::string payload) {
  if (!state_.blackbox.empty()) rel = std::max(rel, state_.blackbox.back().rel_ms);
  state_.blackbox.push_back({rel, kind, std::move(payload)});
}

void Session::record(RecordKind kind, std::string payload) {
  record_at(state_.trace.last_rel_time(), kind, std::move(payload));
}

void Session::emit(StepOutput& out, AdaptationDirective d) {
  if (state_.locked && is_geometry(d)) return;
  if (const auto* lock = std::get_if<directive::Lock>(&d)) {
    state_.locked = true;
    state_.lock_reason = lock->reason;
  } else if (std::holds_alternative<directive::Unlock>(d)) {
    state_.locked = false;
    state_.lock_reason.reset();
  } else if (std::holds_alternative<directive::Challenge>(d)) {
    state_.pending_challenge = true;
  }
  state_.ui = apply_directive(state_.ui, d);
  record(RecordKind::Directive, describe(d));
  out.directives.push_back(std::move(d));
}

void Session::declare(StepOutput& out, const Situation& s) {
  record(RecordKind::Situation, format_situation(s));
  out.situations.push_back(s);
  for (AdaptationDirective& d : plan_situation(s, cfg_.safe_default_action)) emit(out, std::move(d));
}

void Session::unlock(StepOutput& out) {
  state_.pending_challenge = false;
  state_.situations.consecutive_ko_analyses = 0;
  state_.situations.consecutive_superhuman_bursts = 0;
  state_.situations.ko_streak_evidence.clear();
  state_.situations.superhuman_streak_evidence.clear();
  // Evidence gathered before the lock belongs to whoever was locked out.
  analysis_origin_ = state_.trace.size();
  emit(out, directive::Unlock{});
}

StepOutput Session::ingest(Event e) {
  if (state_.terminated) throw Error(ErrorCode::SessionTerminated, "session already ended");
  StepOutput out;
  const bool first = state_.trace.empty();
  state_.trace.append(std::move(e), TimeMode::Lenient);
  const Event& ev = state_.trace.events().back();
  const std::int64_t now = state_.trace.last_rel_time();
  record(RecordKind::Event, event_text(ev));

  if (WidgetState* w = state_.ui.find(widget_for(ev))) {
    ++w->usage_count;
    w->last_used = now;
  }
  const bool exit_event = ev.kind == EventKind::ButtonExit;

  if (state_.locked) {
    state_.situations.last_event_rel_time = now;
    if (exit_event) state_.terminated = true;
    return out;
  }

  // A fresh event answers any earlier deadline miss.
  if (state_.situations.is_active(SituationId::PerfFailure)) {
    state_.situations = clear(state_.situations, SituationId::PerfFailure);
  }
  if (!first) {
    if (auto late = check_deadline(state_.situations, now, cfg_.situations)) {
      state_.situations = activate(state_.situations, *late);
      declare(out, *late);
    }
  }

  EventTrace snapshot = state_.trace.suffix(analysis_origin_);
  snapshot.append(Event::button_exit(ev.raw_time), TimeMode::Lenient);
  const AnalysisReport report = run_all(snapshot, cfg_.analyzer, ScanOptions{.trailing_terminator = true});

  for (const Detection& d : report.detections) {
    if (d.verdict != Verdict::KO) continue;
    Detection abs = d;
    abs.span.start += analysis_origin_;
    abs.span.end = std::min(abs.span.end + analysis_origin_, state_.trace.size());
    if (seen_detections_.emplace(abs.detector, abs.span.start).second) {
      record(RecordKind::Detect, format_detection(abs));
      out.detections.push_back(std::move(abs));
    }
  }

  SituationUpdate su = update(state_.situations, report, now, cfg_.situations);
  state_.situations = std::move(su.state);
  state_.situations.response_expected = true;
  for (const Situation& s : su.declared) declare(out, s);

  if (!state_.locked) {
    const auto scale_bursts =
        detect_fast_bursts(snapshot, ActionCategory::Scale, cfg_.analyzer.fastest_avg_entry_ms, kScaleBurst);
    for (const Detection& burst : scale_bursts) {
      if (burst.verdict != Verdict::KO) continue;
      Detection abs = burst;
      abs.span.start += analysis_origin_;
      abs.span.end = std::min(abs.span.end + analysis_origin_, state_.trace.size());
      if (!handled_scale_bursts_.insert(abs.span.start).second) continue;
      record(RecordKind::Detect, format_detection(abs));
      out.detections.push_back(abs);
      if (auto d = plan_scale(state_.ui, kAgeScale, abs, cfg_.context)) emit(out, std::move(*d));
    }

    const bool paging_due = cfg_.paging_policy == PagingPolicy::LfuEvict ||
                            (cfg_.paging_policy == PagingPolicy::WinnerTakesAll && report.ko_count > 0);
    if (paging_due) {
      if (auto d = plan_paging(state_.ui, cfg_.paging_policy, cfg_.context)) emit(out, std::move(*d));
    }
  }

  if (exit_event) {
    state_.terminated = true;
    state_.situations.response_expected = false;
  }
  return out;
}

StepOutput Session::handle_reauth(const ReauthResult& r) {
  if (!state_.locked) throw Error(ErrorCode::NotLocked, "re-authentication without a lock");
  StepOutput out;
  if (!r.ok) {
    ++state_.failed_reauth;
    record(RecordKind::Reauth, "kind=credentials ok=0 principal=" + r.principal +
                                   " failed=" + std::to_string(state_.failed_reauth));
    emit(out, directive::Alert{directive::AlertLevel::Critical, "re-authentication failed"});
    return out;
  }
  record(RecordKind::Reauth, "kind=credentials ok=1 principal=" + r.principal +
                                 " failed=" + std::to_string(state_.failed_reauth));
  if (state_.lock_reason && state_.situations.is_active(*state_.lock_reason)) {
    state_.situations = clear(state_.situations, *state_.lock_reason);
  }
  if (state_.pending_challenge && state_.situations.is_active(SituationId::S2_BotTakeover)) {
    state_.situations = clear(state_.situations, SituationId::S2_BotTakeover);
  }
  unlock(out);
  return out;
}

StepOutput Session::handle_challenge(bool passed) {
  if (!state_.pending_challenge) throw Error(ErrorCode::NoChallenge, "no challenge pending");
  StepOutput out;
  record(RecordKind::Reauth, std::string("kind=challenge ok=") + (passed ? "1" : "0"));
  if (!passed) {
    emit(out, directive::Alert{directive::AlertLevel::Critical, "challenge failed"});
    return out;
  }
  if (state_.situations.is_active(SituationId::S2_BotTakeover)) {
    state_.situations = clear(state_.situations, SituationId::S2_BotTakeover);
  }
  unlock(out);
  return out;
}

StepOutput Session::request_restore() {
  StepOutput out;
  if (state_.locked) return out;
  AdaptationDirective d = restore(state_.ui);
  state_.ui = apply_directive(state_.ui, d);
  record(RecordKind::Directive, describe(d) + " source=user");
  out.directives.push_back(std::move(d));
  return out;
}

StepOutput Session::tick(std::int64_t now_rel) {
  StepOutput out;
  if (state_.terminated || state_.trace.empty()) return out;
  if (auto late = check_deadline(state_.situations, now_rel, cfg_.situations)) {
    state_.situations = activate(state_.situations, *late);
    record_at(now_rel, RecordKind::Situation, format_situation(*late));
    out.situations.push_back(*late);
    for (AdaptationDirective& d : plan_situation(*late, cfg_.safe_default_action)) {
      if (state_.locked && is_geometry(d)) continue;
      if (const auto* lock = std::get_if<directive::Lock>(&d)) {
        state_.locked = true;
        state_.lock_reason = lock->reason;
      }
      record_at(now_rel, RecordKind::Directive, describe(d));
      out.directives.push_back(std::move(d));
    }
  }
  return out;
}

std::string Session::export_blackbox() const {
  std::string doc(kBlackboxHeader);
  doc += '\n';
  for (const BlackboxRecord& r : state_.blackbox) {
    doc += r.to_line();
    doc += '\n';
  }
  return doc;
}

namespace {

struct ParsedRecord {
  std::int64_t rel = 0;
  std::string kind;
  std::string payload;
};

std::vector<ParsedRecord> parse_records(std::string_view doc) {
  std::vector<ParsedRecord> out;
  const auto lines = split_lines(doc);
  if (lines.empty() || lines.front() != kBlackboxHeader) {
    throw Error(ErrorCode::MalformedLine, "line 1: expected \"" + std::string(kBlackboxHeader) + "\"");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const auto sp1 = line.find(' ');
    const auto sp2 = sp1 == std::string::npos ? std::string::npos : line.find(' ', sp1 + 1);
    ParsedRecord r;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + (sp1 == std::string::npos ? line.size() : sp1), r.rel);
    if (sp1 == std::string::npos || ec != std::errc{}) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(i + 1) + ": expected \"<rel_ms> <KIND> ...\"");
    }
    if (sp2 == std::string::npos) {
      r.kind = line.substr(sp1 + 1);
    } else {
      r.kind = line.substr(sp1 + 1, sp2 - sp1 - 1);
      r.payload = line.substr(sp2 + 1);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<std::string> extract_event_lines(std::string_view blackbox) {
  std::vector<std::string> out;
  for (ParsedRecord& r : parse_records(blackbox)) {
    if (r.kind == "EVENT") out.push_back(std::move(r.payload));
  }
  return out;
}

ReplayResult replay_blackbox(std::string_view blackbox, const EngineConfig& cfg) {
  ReplayResult result{{}, Session(cfg)};
  const auto take = [&](StepOutput step) {
    for (auto& d : step.directives) result.directives.push_back(std::move(d));
  };
  std::size_t line_no = 1;
  for (const ParsedRecord& r : parse_records(blackbox)) {
    ++line_no;
    if (r.kind == "EVENT") {
      ParseOutcome o = parse_line(r.payload, line_no, ParseMode::Recovery);
      take(result.session.ingest(std::move(*o.event)));
    } else if (r.kind == "REAUTH") {
      const auto kind = field(r.payload, "kind");
      const bool ok = field(r.payload, "ok") == std::optional<std::string>("1");
      if (kind == std::optional<std::string>("challenge")) {
        take(result.session.handle_challenge(ok));
      } else {
        take(result.session.handle_reauth({ok, field(r.payload, "principal").value_or("")}));
      }
    } else if (r.kind == "DIRECTIVE" && r.payload.starts_with("restore") &&
               field(r.payload, "source") == std::optional<std::string>("user")) {
      take(result.session.request_restore());
    }
  }
  return result;
}

}  // namespace icode
