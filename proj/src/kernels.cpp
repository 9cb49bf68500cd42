#include "icode/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace icode {

std::vector<ParseOutcome> parse_lines(std::span<const std::string> lines, ParseMode /*mode*/, Exec exec) {
  std::vector<ParseOutcome> out(lines.size());
  const auto n = static_cast<std::ptrdiff_t>(lines.size());
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = parse_line(lines[i], static_cast<std::size_t>(i) + 1, ParseMode::Recovery);
    return out;
  }
  // parse_line does not throw in recovery mode, so nothing escapes the region.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = parse_line(lines[i], static_cast<std::size_t>(i) + 1, ParseMode::Recovery);
  }
  return out;
}

std::vector<AnalysisReport> analyze_batch(std::span<const EventTrace> traces, const AnalyzerConfig& cfg, Exec exec) {
  cfg.validate();
  std::vector<AnalysisReport> out(traces.size());
  const auto n = static_cast<std::ptrdiff_t>(traces.size());
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = run_all(traces[i], cfg);
    return out;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = run_all(traces[i], cfg);
    } catch (...) {
#pragma omp critical(icode_batch_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

int parallel_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace icode
