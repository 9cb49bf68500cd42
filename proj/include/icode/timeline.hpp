#pragma once

// Interaction summaries: one row per action category, one mark per event,
// KO detections drawn as annotated intervals.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "icode/analyzers.hpp"
#include "icode/model.hpp"

namespace icode {

struct TimelineMark {
  ActionCategory category = ActionCategory::Entry;
  std::int64_t rel_ms = 0;
  std::size_t event_index = 0;
};

struct TimelineAnnotation {
  std::string detector;
  Verdict verdict = Verdict::KO;
  Span span;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
};

struct TimelineDoc {
  std::vector<ActionCategory> rows;
  std::vector<TimelineMark> marks;
  std::vector<TimelineAnnotation> annotations;
  std::int64_t duration_ms = 0;
};

TimelineDoc build_timeline(const EventTrace& trace, const AnalyzerConfig& cfg = {});

/// Fixed-width text chart; each column covers an equal slice of the trace.
std::string render_text(const TimelineDoc& doc, std::size_t columns = 72);

/// Standalone SVG at `ms_per_px` milliseconds per horizontal pixel.
std::string render_svg(const TimelineDoc& doc, double ms_per_px = 10.0);

}  // namespace icode
