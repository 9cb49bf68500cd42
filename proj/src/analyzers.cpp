#include "icode/analyzers.hpp"

#include <algorithm>

#include "icode/error.hpp"

namespace icode {
namespace {

std::size_t scanned_length(const EventTrace& trace, const ScanOptions& opts) {
  if (opts.trailing_terminator && !trace.empty()) return trace.size() - 1;
  return trace.size();
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::OK: return "OK";
    case Verdict::KO: return "KO";
    case Verdict::PENDING: return "PENDING";
  }
  return "?";
}

void AnalyzerConfig::validate() const {
  if (!(fastest_avg_entry_ms > 0.0)) throw Error(ErrorCode::InvalidConfig, "fastest_avg_entry_ms must be > 0");
}

Detection detect_button_before_entry(const EventTrace& trace, const ScanOptions& opts) {
  const std::size_t n = scanned_length(trace, opts);
  std::size_t first_entry = n;
  std::size_t first_button = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (category(trace[i]) == ActionCategory::Entry) {
      first_entry = i;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (category(trace[i]) == ActionCategory::Button) {
      first_button = i;
      break;
    }
  }
  Detection d;
  d.detector = std::string(kButtonBeforeEntry);
  d.verdict = first_button < first_entry ? Verdict::KO : Verdict::OK;
  d.span = {std::min(first_button, first_entry), std::max(first_button, first_entry)};
  return d;
}

std::vector<Detection> detect_button_bursts(const EventTrace& trace, const ScanOptions& opts) {
  const std::size_t n = scanned_length(trace, opts);
  std::vector<Detection> out;
  std::size_t i = 0;
  while (i < n) {
    if (category(trace[i]) != ActionCategory::Button) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < n && category(trace[i]) == ActionCategory::Button) ++i;
    const std::size_t run = i - start;
    if (run > 1) {
      Detection d;
      d.detector = std::string(kButtonBurst);
      d.verdict = Verdict::KO;
      d.span = {start, i};
      d.metrics.run_length = static_cast<std::int64_t>(run);
      out.push_back(std::move(d));
    }
  }
  if (out.empty()) {
    Detection d;
    d.detector = std::string(kButtonBurst);
    d.verdict = Verdict::OK;
    d.span = {0, n};
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> detect_fast_bursts(const EventTrace& trace, ActionCategory alphabet, double threshold_ms,
                                          std::string_view detector_id) {
  std::vector<Detection> out;
  const std::size_t n = trace.size();
  std::size_t cursor = 0;
  while (cursor < n) {
    std::size_t first = cursor;
    while (first < n && category(trace[first]) != alphabet) ++first;
    if (first == n) break;
    std::size_t after = first + 1;
    while (after < n && category(trace[after]) == alphabet) ++after;

    Detection d;
    d.detector = std::string(detector_id);
    d.span = {first, after};
    const auto run = static_cast<std::int64_t>(after - first);
    d.metrics.run_length = run;
    if (after == n) {
      d.verdict = Verdict::PENDING;
      out.push_back(std::move(d));
      break;
    }
    const std::int64_t duration = trace.rel_time(after) - trace.rel_time(first);
    d.metrics.burst_duration_ms = duration;
    d.verdict = Verdict::OK;
    if (run > 1) {
      const double gradient = static_cast<double>(duration) / static_cast<double>(run);
      d.metrics.gradient_ms_per_char = gradient;
      if (gradient < threshold_ms) d.verdict = Verdict::KO;
    }
    out.push_back(std::move(d));
    cursor = after + 1;
  }
  return out;
}

std::vector<Detection> detect_fast_entry_bursts(const EventTrace& trace, const AnalyzerConfig& cfg) {
  cfg.validate();
  return detect_fast_bursts(trace, ActionCategory::Entry, cfg.fastest_avg_entry_ms, kFastEntry);
}

DetectorRegistry DetectorRegistry::builtin() {
  DetectorRegistry r;
  r.add(std::string(kButtonBeforeEntry), [](const EventTrace& t, const AnalyzerConfig&, const ScanOptions& o) {
    return std::vector<Detection>{detect_button_before_entry(t, o)};
  });
  r.add(std::string(kButtonBurst), [](const EventTrace& t, const AnalyzerConfig&, const ScanOptions& o) {
    return detect_button_bursts(t, o);
  });
  r.add(std::string(kFastEntry), [](const EventTrace& t, const AnalyzerConfig& c, const ScanOptions&) {
    return detect_fast_entry_bursts(t, c);
  });
  return r;
}

void DetectorRegistry::add(std::string id, DetectorFn fn) {
  if (contains(id)) throw Error(ErrorCode::InvalidConfig, "detector already registered: " + id);
  entries_.emplace_back(std::move(id), std::move(fn));
}

bool DetectorRegistry::contains(std::string_view id) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == id; });
}

AnalysisReport run_all(const EventTrace& trace, const AnalyzerConfig& cfg, const ScanOptions& opts,
                       const DetectorRegistry& registry) {
  cfg.validate();
  for (const auto& id : cfg.enabled_detectors) {
    if (!registry.contains(id)) throw Error(ErrorCode::UnknownDetector, id);
  }
  AnalysisReport report;
  report.trace_len = trace.size();
  for (const auto& [id, fn] : registry.entries()) {
    if (std::find(cfg.enabled_detectors.begin(), cfg.enabled_detectors.end(), id) == cfg.enabled_detectors.end()) {
      continue;
    }
    for (Detection& d : fn(trace, cfg, opts)) {
      if (d.verdict == Verdict::KO) ++report.ko_count;
      report.detections.push_back(std::move(d));
    }
  }
  return report;
}

AnalysisReport run_all(const EventTrace& trace, const AnalyzerConfig& cfg, const ScanOptions& opts) {
  static const DetectorRegistry registry = DetectorRegistry::builtin();
  return run_all(trace, cfg, opts, registry);
}

}  // namespace icode
