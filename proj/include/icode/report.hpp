#pragma once

// Batch analysis of an iCode document, as printed by `icode analyze`.

#include <string>
#include <string_view>
#include <vector>

#include "icode/analyzers.hpp"
#include "icode/config.hpp"
#include "icode/planner.hpp"
#include "icode/situations.hpp"

namespace icode {

enum ExitCode : int { kExitClean = 0, kExitKo = 1, kExitParseError = 2 };

struct AnalyzeResult {
  int exit_code = kExitClean;
  AnalysisReport report;                        // whole-trace analysis
  std::vector<Situation> situations;            // declared during the per-prefix replay
  std::vector<AdaptationDirective> directives;  // planned during the replay
  std::string error;                            // parse/I/O error text when exit_code == 2
  std::string text;                             // human-readable report + machine-readable JSON section
};

/// Strict parse, whole-trace detector run and a per-prefix session replay.
AnalyzeResult analyze_document(std::string_view document, const EngineConfig& cfg, std::string_view source_name);

}  // namespace icode
