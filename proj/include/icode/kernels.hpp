#pragma once

// Data-parallel batch kernels. Each has a serial path kept as the reference
// the OpenMP path is tested against; both must give identical results.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "icode/analyzers.hpp"
#include "icode/parser.hpp"

namespace icode {

enum class Exec { Serial, Parallel };

/// parse_stream switches to the parallel line parser above this many lines.
inline constexpr std::size_t kParallelParseThreshold = 4096;

/// Parses every line independently (always in recovery form; `mode` only
/// decides whether assemble_stream later rejects diagnostics).
std::vector<ParseOutcome> parse_lines(std::span<const std::string> lines, ParseMode mode, Exec exec);

/// run_all over many independent traces.
std::vector<AnalysisReport> analyze_batch(std::span<const EventTrace> traces, const AnalyzerConfig& cfg, Exec exec);

/// Worker threads the parallel path would use (1 without OpenMP).
int parallel_workers();

}  // namespace icode
