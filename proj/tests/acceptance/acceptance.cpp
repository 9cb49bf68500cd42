// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <string>

#include "icode/error.hpp"
#include "icode/parser.hpp"
#include "icode/protocol.hpp"
#include "icode/session.hpp"
#include "icode/simulate.hpp"
#include "support/reference_compare.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace icode;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void check(const char* name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(name, ok, detail);
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

EventTrace load(const std::string& name) {
  return parse_stream(testing::fixture_lines(name), ParseMode::Strict).trace;
}

std::vector<Detection> ko_of(const std::vector<Detection>& ds) {
  std::vector<Detection> out;
  for (const auto& d : ds) {
    if (d.verdict == Verdict::KO) out.push_back(d);
  }
  return out;
}

EventTrace to_trace(const std::vector<Event>& events) {
  EventTrace t;
  for (const auto& e : events) t.append(e);
  return t;
}

std::pair<bool, std::string> fast_burst_reproduction() {
  const auto t0 = Clock::now();
  const EventTrace fast = load("fast_entry.icode");
  const EventTrace slow = load("slow_entry.icode");
  const auto fast_ko = ko_of(detect_fast_entry_bursts(fast, {}));
  const auto slow_ko = ko_of(detect_fast_entry_bursts(slow, {}));

  // Reference routine on the same stacks.
  int i1, i2, dur;
  const int ref_fast = refscan::discomfort_detection_3(testing::stacks_of(fast), &i1, &i2, &dur);
  const double ref_gradient = static_cast<double>(dur) / (i2 - i1);
  const int ref_slow = refscan::discomfort_detection_3(testing::stacks_of(slow), &i1, &i2, &dur);

  const double elapsed = seconds_since(t0);
  const bool ok = fast_ko.size() == 1 && fast_ko[0].detector == kFastEntry && slow_ko.empty() &&
                  ref_fast == refscan::KO && ref_slow == refscan::OK &&
                  std::abs(*fast_ko[0].metrics.gradient_ms_per_char - ref_gradient) < 1e-9 && elapsed < 1.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "4.7 chars/s: %zu KO, gradient %.1f ms/char; 2.5 chars/s: %zu KO; %.3f s",
                fast_ko.size(), fast_ko.empty() ? 0.0 : *fast_ko[0].metrics.gradient_ms_per_char, slow_ko.size(),
                elapsed);
  return {ok, buf};
}

std::pair<bool, std::string> threshold_boundary() {
  // 1000 entries then a button: gradient = duration / 1000.
  const auto verdict_for = [](std::int64_t duration) {
    EventTrace t;
    for (int i = 0; i < 1000; ++i) t.append(Event::entry_insert("k", "a", i, Timestamp{i * 329}));
    t.append(Event::button_pressed(Timestamp{duration}));
    const auto ds = detect_fast_entry_bursts(t, {});
    return std::make_pair(ds.at(0).verdict, *ds.at(0).metrics.gradient_ms_per_char);
  };
  const auto [at, g_at] = verdict_for(330000);
  const auto [below, g_below] = verdict_for(329999);
  char buf[128];
  std::snprintf(buf, sizeof buf, "gradient %.3f -> %s, gradient %.3f -> %s", g_at, std::string(to_string(at)).c_str(),
                g_below, std::string(to_string(below)).c_str());
  return {g_at == 330.0 && at == Verdict::OK && std::abs(g_below - 329.999) < 1e-9 && below == Verdict::KO, buf};
}

std::pair<bool, std::string> scale_trajectory() {
  using namespace directive;
  const std::vector<AdaptationDirective> expected = {Resize{"age_scale", 220}, Resize{"age_scale", 240},
                                                     Reorient{"age_scale", Orientation::Vertical, 260}};
  const ContextModel ctx;
  UIModel ui = UIModel::demo(ctx);
  std::vector<AdaptationDirective> planned;
  const Detection burst{std::string(kScaleBurst), Verdict::KO, {0, 4}, {}};
  for (int i = 0; i < 3; ++i) {
    if (auto d = plan_scale(ui, kAgeScale, burst, ctx)) {
      planned.push_back(*d);
      ui = apply_directive(ui, *d);
    }
  }

  // Same policy reached through a session fed rapid scale moves.
  Session s;
  std::vector<AdaptationDirective> live;
  std::int64_t t = 0;
  for (int b = 0; b < 3; ++b) {
    for (int i = 0; i < 4; ++i) {
      for (auto& d : s.ingest(Event::scale(20 + 10 * i, Timestamp{t += 120})).directives) live.push_back(d);
    }
    s.ingest(Event::entry_focus("name", Timestamp{t += 3000}));
    t += 3000;
  }
  std::string got;
  for (const auto& d : live) got += (got.empty() ? "" : ", ") + describe(d);
  return {planned == expected && live == expected, got};
}

std::pair<bool, std::string> multi_detection() {
  const AnalysisReport r = run_all(load("premature_double.icode"), {});
  bool before = false, burst = false;
  for (const auto& d : ko_of(r.detections)) {
    before = before || d.detector == kButtonBeforeEntry;
    burst = burst || d.detector == kButtonBurst;
  }
  return {r.ko_count >= 2 && before && burst, "ko_count " + std::to_string(r.ko_count)};
}

std::pair<bool, std::string> oracle_equivalence() {
  const auto t0 = Clock::now();
  std::size_t traces = 0;
  long mismatches = 0;
  for (int len = 0; len <= 8; ++len) {
    std::vector<std::vector<std::int64_t>> grids;
    std::vector<std::int64_t> times;
    std::function<void(int)> rec = [&](std::int64_t min_t) {
      if (static_cast<int>(times.size()) == len) {
        grids.push_back(times);
        return;
      }
      for (std::int64_t t = min_t; t <= 800; t += 100) {
        times.push_back(t);
        rec(static_cast<int>(t));
        times.pop_back();
      }
    };
    rec(0);
    const long n = static_cast<long>(grids.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : mismatches)
    for (long g = 0; g < n; ++g) {
      for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
        std::vector<ActionCategory> cats;
        for (int i = 0; i < len; ++i) cats.push_back((mask >> i) & 1u ? ActionCategory::Button : ActionCategory::Entry);
        mismatches += testing::reference_mismatches(testing::trace_of(cats, grids[g]));
      }
    }
    traces += grids.size() << len;
  }
  const double elapsed = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu traces, %ld mismatches, %.1f s on %d threads", traces, mismatches, elapsed,
                omp_get_max_threads());
  return {mismatches == 0 && elapsed < 60.0, buf};
}

std::pair<bool, std::string> parser_round_trip() {
  std::mt19937_64 rng(20130226);
  int failed = 0;
  for (int i = 0; i < 10000; ++i) {
    const Event e = testing::random_event(rng);
    const ParseOutcome o = parse_line(format_event(e), 1, ParseMode::Recovery);
    if (!o.ok() || !(*o.event == e)) ++failed;
  }
  return {failed == 0, "10000 events, " + std::to_string(failed) + " failures"};
}

std::pair<bool, std::string> lockout_protocol() {
  std::vector<Event> stream = {Event::entry_focus("name", Timestamp{0}), Event::button_pressed(Timestamp{1000}),
                               Event::button_pressed(Timestamp{1100}), Event::button_pressed(Timestamp{1200}),
                               Event::button_pressed(Timestamp{1300})};
  // Expected onset: third consecutive KO-bearing snapshot.
  int streak = 0;
  std::optional<std::size_t> expected_at;
  EventTrace prefix;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    prefix.append(stream[i]);
    EventTrace snap = prefix;
    snap.append(Event::button_exit(stream[i].raw_time));
    streak = run_all(snap, {}, {.trailing_terminator = true}).ko_count > 0 ? streak + 1 : 0;
    if (streak == 3 && !expected_at) expected_at = i;
  }
  for (int i = 0; i < 4; ++i) stream.push_back(Event::entry_insert("name", "x", i, Timestamp{1400 + 40 * i}));
  stream.push_back(Event::button_pressed(Timestamp{1600}));
  stream.push_back(Event::button_pressed(Timestamp{1650}));

  Session s;
  std::string trace_str;
  std::optional<std::size_t> lock_at;
  std::size_t directives_while_locked = 0;
  bool ok = true;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto step = s.ingest(stream[i]);
    for (const auto& d : step.directives) {
      if (d == AdaptationDirective(directive::Lock{SituationId::S1_UserChanged}) && !lock_at) lock_at = i;
    }
    if (lock_at && i > *lock_at) directives_while_locked += step.directives.size();
    trace_str += s.locked() ? 'L' : '-';
  }
  const auto unlock = s.handle_reauth({true, "operator"});
  trace_str += s.locked() ? 'L' : '-';
  ok = expected_at == std::size_t{4} && lock_at == expected_at && directives_while_locked == 0 &&
       unlock.directives == std::vector<AdaptationDirective>{directive::Unlock{}} && !s.locked() &&
       s.state().situations.consecutive_ko_analyses == 0 && s.state().situations.consecutive_superhuman_bursts == 0 &&
       trace_str == "----LLLLLLL-";
  return {ok, "lock states " + trace_str + ", " + std::to_string(directives_while_locked) + " directives while locked"};
}

std::pair<bool, std::string> simulator_separation() {
  int bot = 0, normal = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    bot += !ko_of(detect_fast_entry_bursts(to_trace(simulate(Profile::bot(), 10000, seed)), {})).empty();
    normal += !ko_of(detect_fast_entry_bursts(to_trace(simulate(Profile::normal(), 10000, seed)), {})).empty();
  }
  return {bot == 20 && normal == 0,
          "bot flagged " + std::to_string(bot) + "/20, normal flagged " + std::to_string(normal) + "/20"};
}

std::pair<bool, std::string> blackbox_round_trip() {
  int sessions = 0, mismatched = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (const auto& p : {Profile::normal(), Profile::distressed(), Profile::bot()}) {
      Session s;
      for (const Event& e : simulate(p, 15000, seed)) {
        s.ingest(e);
        if (s.state().pending_challenge) s.handle_challenge(true);
        if (s.locked()) s.handle_reauth({true, "op"});
      }
      const std::string doc = s.export_blackbox();
      const auto lines = extract_event_lines(doc);
      const StreamResult back = parse_stream(lines, ParseMode::Strict);
      bool same = back.diagnostics.empty() && back.trace == s.state().trace && lines.size() == back.trace.size();
      for (std::size_t i = 0; same && i < lines.size(); ++i) same = format_event(back.trace[i]) == lines[i];
      mismatched += !same;
      ++sessions;
    }
  }
  return {mismatched == 0, std::to_string(sessions) + " sessions, " + std::to_string(mismatched) + " mismatches"};
}

/// Offline replay straight through the session runtime.
std::vector<std::string> session_replay(const std::vector<std::string>& lines) {
  Session s;
  std::vector<std::string> out;
  const auto take = [&](const StepOutput& step) {
    for (const auto& d : step.directives) out.push_back(directive_line(d));
  };
  for (const std::string& line : lines) {
    try {
      if (line.starts_with("REAUTH ")) {
        const auto rest = line.substr(7);
        take(s.handle_reauth({rest.starts_with("ok"), rest.substr(rest.find(' ') + 1)}));
      } else if (line.starts_with("CHALLENGE ")) {
        take(s.handle_challenge(line.substr(10) == "ok"));
      } else if (line == "RESTORE") {
        take(s.request_restore());
      } else {
        ParseOutcome o = parse_line(line, 1, ParseMode::Recovery);
        if (o.diagnostic) continue;
        take(s.ingest(*o.event));
      }
    } catch (const Error&) {
    }
    if (s.terminated()) break;
  }
  return out;
}

std::pair<bool, std::string> serve_matches_offline() {
  LineServer server({}, 0);
  server.start();
  const auto paths = testing::session_fixtures();
  std::vector<std::future<std::vector<std::string>>> replies;
  for (const auto& p : paths) {
    replies.push_back(std::async(std::launch::async, [&server, p] {
      return testing::exchange(server.port(), split_lines(testing::slurp(p)));
    }));
  }
  int matched = 0;
  std::size_t directives = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::vector<std::string> served;
    for (auto& l : replies[i].get()) {
      if (is_directive_line(l)) served.push_back(l);
    }
    const auto offline = session_replay(split_lines(testing::slurp(paths[i])));
    directives += offline.size();
    matched += served == offline;
  }
  server.stop();
  return {paths.size() == 5 && matched == 5,
          std::to_string(matched) + "/" + std::to_string(paths.size()) + " sessions identical, " +
              std::to_string(directives) + " directives"};
}

}  // namespace

int main() {
  check("fast-entry burst reproduction", fast_burst_reproduction);
  check("threshold boundary", threshold_boundary);
  check("scale widget trajectory", scale_trajectory);
  check("premature and double press detections", multi_detection);
  check("exhaustive oracle equivalence", oracle_equivalence);
  check("parser round trip", parser_round_trip);
  check("lockout protocol", lockout_protocol);
  check("simulator separation", simulator_separation);
  check("blackbox round trip", blackbox_round_trip);
  check("serve matches offline replay", serve_matches_offline);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
