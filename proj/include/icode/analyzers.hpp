#pragma once

// Discomfort/misuse detectors over an EventTrace, plus the registry that
// runs them in order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icode/model.hpp"

namespace icode {

inline constexpr std::string_view kButtonBeforeEntry = "button-before-entry";
inline constexpr std::string_view kButtonBurst = "button-burst";
inline constexpr std::string_view kFastEntry = "fast-entry";

enum class Verdict { OK, KO, PENDING };
std::string_view to_string(Verdict v);

/// Half-open-ish index span into the analyzed trace: start <= end <= size.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct DetectionMetrics {
  std::optional<std::int64_t> burst_duration_ms;
  std::optional<double> gradient_ms_per_char;
  std::optional<std::int64_t> run_length;
  friend bool operator==(const DetectionMetrics&, const DetectionMetrics&) = default;
};

struct Detection {
  std::string detector;
  Verdict verdict = Verdict::OK;
  Span span;
  DetectionMetrics metrics;
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct AnalyzerConfig {
  double fastest_avg_entry_ms = 330.0;
  std::vector<std::string> enabled_detectors{std::string(kButtonBeforeEntry), std::string(kButtonBurst),
                                             std::string(kFastEntry)};

  /// Throws InvalidConfig unless fastest_avg_entry_ms > 0.
  void validate() const;
  friend bool operator==(const AnalyzerConfig&, const AnalyzerConfig&) = default;
};

struct AnalysisReport {
  std::vector<Detection> detections;
  std::size_t ko_count = 0;
  std::size_t trace_len = 0;
  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Analysis of a live snapshot: when `trailing_terminator` is set the last
/// event is a synthetic end marker. It closes entry bursts but is invisible to
/// the button detectors.
struct ScanOptions {
  bool trailing_terminator = false;
};

Detection detect_button_before_entry(const EventTrace& trace, const ScanOptions& opts = {});
std::vector<Detection> detect_button_bursts(const EventTrace& trace, const ScanOptions& opts = {});
std::vector<Detection> detect_fast_entry_bursts(const EventTrace& trace, const AnalyzerConfig& cfg);

/// The fast-entry burst walk over an arbitrary category. A run is KO when it
/// has more than one event and its mean step (measured up to the first event
/// after the run) is strictly below `threshold_ms`. A run reaching the end of
/// the trace is PENDING and ends the walk.
std::vector<Detection> detect_fast_bursts(const EventTrace& trace, ActionCategory alphabet, double threshold_ms,
                                          std::string_view detector_id);

using DetectorFn = std::function<std::vector<Detection>(const EventTrace&, const AnalyzerConfig&, const ScanOptions&)>;

class DetectorRegistry {
 public:
  /// Registry holding the three built-in detectors in their canonical order.
  static DetectorRegistry builtin();

  /// Throws InvalidConfig when `id` is already registered.
  void add(std::string id, DetectorFn fn);
  bool contains(std::string_view id) const;
  const std::vector<std::pair<std::string, DetectorFn>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, DetectorFn>> entries_;
};

/// Runs every enabled detector in registry order. Throws UnknownDetector when
/// the config enables an identifier the registry lacks.
AnalysisReport run_all(const EventTrace& trace, const AnalyzerConfig& cfg, const ScanOptions& opts = {});
AnalysisReport run_all(const EventTrace& trace, const AnalyzerConfig& cfg, const ScanOptions& opts,
                       const DetectorRegistry& registry);

}  // namespace icode
