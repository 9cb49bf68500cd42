#include "icode/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace icode {

TimelineDoc build_timeline(const EventTrace& trace, const AnalyzerConfig& cfg) {
  TimelineDoc doc;
  doc.rows = {ActionCategory::Entry, ActionCategory::Button, ActionCategory::Scale, ActionCategory::YScroll,
              ActionCategory::Error};
  for (std::size_t i = 0; i < trace.size(); ++i) doc.marks.push_back({category(trace[i]), trace.rel_time(i), i});
  doc.duration_ms = trace.last_rel_time();
  if (trace.empty()) return doc;
  for (const Detection& d : run_all(trace, cfg).detections) {
    if (d.verdict != Verdict::KO) continue;
    const std::size_t last = std::min(d.span.end, trace.size() - 1);
    doc.annotations.push_back({d.detector, d.verdict, d.span, trace.rel_time(d.span.start), trace.rel_time(last)});
  }
  return doc;
}

std::string render_text(const TimelineDoc& doc, std::size_t columns) {
  columns = std::max<std::size_t>(columns, 1);
  std::ostringstream out;
  const double ms_per_col = std::max(1.0, static_cast<double>(doc.duration_ms + 1) / static_cast<double>(columns));
  out << "timeline: " << doc.marks.size() << " events over " << doc.duration_ms << " ms";
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.1f ms per column\n", ms_per_col);
  out << buf;
  const auto column_of = [&](std::int64_t ms) {
    return std::min(columns - 1, static_cast<std::size_t>(static_cast<double>(ms) / ms_per_col));
  };
  for (ActionCategory row : doc.rows) {
    std::vector<int> counts(columns, 0);
    for (const TimelineMark& m : doc.marks) {
      if (m.category == row) ++counts[column_of(m.rel_ms)];
    }
    std::string label(to_string(row));
    label.resize(8, ' ');
    out << label << '|';
    for (int c : counts) out << (c == 0 ? '.' : c == 1 ? '*' : c < 10 ? static_cast<char>('0' + c) : '#');
    out << "|\n";
  }
  if (!doc.annotations.empty()) {
    out << "detections:\n";
    for (const TimelineAnnotation& a : doc.annotations) {
      std::string bar(columns, ' ');
      for (std::size_t c = column_of(a.start_ms); c <= column_of(a.end_ms); ++c) bar[c] = '=';
      std::string label = a.detector;
      out << "        |" << bar << "| " << label << ' ' << to_string(a.verdict) << " events " << a.span.start << ".."
          << a.span.end << " (" << a.start_ms << ".." << a.end_ms << " ms)\n";
    }
  }
  return out.str();
}

std::string render_svg(const TimelineDoc& doc, double ms_per_px) {
  if (!(ms_per_px > 0.0)) ms_per_px = 10.0;
  constexpr int kLeft = 90;
  constexpr int kRowHeight = 30;
  constexpr int kTop = 20;
  const int plot_width = static_cast<int>(std::ceil(static_cast<double>(doc.duration_ms) / ms_per_px)) + 20;
  const int height = kTop + kRowHeight * static_cast<int>(doc.rows.size()) + 20 +
                     14 * static_cast<int>(doc.annotations.size()) + 10;
  const auto x_of = [&](std::int64_t ms) { return kLeft + static_cast<double>(ms) / ms_per_px; };
  const auto y_of = [&](ActionCategory c) {
    const auto it = std::find(doc.rows.begin(), doc.rows.end(), c);
    return kTop + kRowHeight * static_cast<int>(it - doc.rows.begin()) + kRowHeight / 2;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + plot_width << "\" height=\"" << height
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
  for (ActionCategory row : doc.rows) {
    const int y = y_of(row);
    out << "  <text x=\"4\" y=\"" << y + 4 << "\">" << to_string(row) << "</text>\n";
    out << "  <line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_width << "\" y2=\"" << y
        << "\" stroke=\"#ccc\"/>\n";
  }
  for (const TimelineMark& m : doc.marks) {
    out << "  <circle class=\"mark\" cx=\"" << x_of(m.rel_ms) << "\" cy=\"" << y_of(m.category)
        << "\" r=\"3\"><title>#" << m.event_index << " @" << m.rel_ms << " ms</title></circle>\n";
  }
  int y = kTop + kRowHeight * static_cast<int>(doc.rows.size()) + 10;
  for (const TimelineAnnotation& a : doc.annotations) {
    const double x0 = x_of(a.start_ms);
    const double w = std::max(2.0, x_of(a.end_ms) - x0);
    out << "  <rect class=\"detection\" x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << w
        << "\" height=\"10\" fill=\"#d33\" fill-opacity=\"0.4\"><title>" << a.detector << ' '
        << to_string(a.verdict) << "</title></rect>\n";
    out << "  <text x=\"" << x0 + w + 4 << "\" y=\"" << y + 9 << "\">" << a.detector << "</text>\n";
    y += 14;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace icode
