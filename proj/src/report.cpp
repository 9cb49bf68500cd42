#include "icode/report.hpp"

#include <json.hpp>
#include <sstream>

#include "icode/error.hpp"
#include "icode/parser.hpp"
#include "icode/session.hpp"

namespace icode {
namespace {

nlohmann::json to_json(const Detection& d) {
  nlohmann::json j{{"detector", d.detector},
                   {"verdict", std::string(to_string(d.verdict))},
                   {"start", d.span.start},
                   {"end", d.span.end}};
  if (d.metrics.run_length) j["run_length"] = *d.metrics.run_length;
  if (d.metrics.burst_duration_ms) j["burst_duration_ms"] = *d.metrics.burst_duration_ms;
  if (d.metrics.gradient_ms_per_char) j["gradient_ms_per_char"] = *d.metrics.gradient_ms_per_char;
  return j;
}

}  // namespace

AnalyzeResult analyze_document(std::string_view document, const EngineConfig& cfg, std::string_view source_name) {
  AnalyzeResult result;
  std::ostringstream out;
  out << "source: " << source_name << '\n';

  StreamResult parsed;
  try {
    const auto lines = split_lines(document);
    parsed = parse_stream(lines, ParseMode::Strict);
  } catch (const Error& e) {
    result.exit_code = kExitParseError;
    result.error = e.what();
    out << "parse error: " << e.what() << '\n';
    result.text = out.str();
    return result;
  }
  const EventTrace& trace = parsed.trace;
  result.report = run_all(trace, cfg.analyzer);

  Session replay(cfg);
  for (const Event& e : trace.events()) {
    if (replay.terminated()) break;
    StepOutput step = replay.ingest(e);
    for (auto& s : step.situations) result.situations.push_back(std::move(s));
    for (auto& d : step.directives) result.directives.push_back(std::move(d));
  }

  out << "events: " << trace.size() << ", span: " << trace.last_rel_time() << " ms\n";
  out << "detections:\n";
  for (const Detection& d : result.report.detections) out << "  " << format_detection(d) << '\n';
  out << "ko_count: " << result.report.ko_count << '\n';
  out << "situations:" << (result.situations.empty() ? " none" : "") << '\n';
  for (const Situation& s : result.situations) out << "  " << format_situation(s) << '\n';
  out << "directives:" << (result.directives.empty() ? " none" : "") << '\n';
  for (const AdaptationDirective& d : result.directives) out << "  " << describe(d) << '\n';

  nlohmann::json j;
  j["source"] = std::string(source_name);
  j["events"] = trace.size();
  j["span_ms"] = trace.last_rel_time();
  j["ko_count"] = result.report.ko_count;
  j["detections"] = nlohmann::json::array();
  for (const Detection& d : result.report.detections) j["detections"].push_back(to_json(d));
  j["situations"] = nlohmann::json::array();
  for (const Situation& s : result.situations) {
    j["situations"].push_back({{"id", std::string(to_string(s.id))}, {"onset", s.onset}, {"evidence", s.evidence.size()}});
  }
  j["directives"] = nlohmann::json::array();
  for (const AdaptationDirective& d : result.directives) j["directives"].push_back(describe(d));
  out << "--- json ---\n" << j.dump() << '\n';

  result.exit_code = result.report.ko_count > 0 ? kExitKo : kExitClean;
  result.text = out.str();
  return result;
}

}  // namespace icode
