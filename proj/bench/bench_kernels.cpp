// Serial vs OpenMP kernels on simulated workloads.

#include <benchmark/benchmark.h>

#include "icode/kernels.hpp"
#include "icode/simulate.hpp"

namespace {

using namespace icode;

std::vector<std::string> make_lines(std::size_t n) {
  std::vector<std::string> lines;
  for (std::uint64_t seed = 0; lines.size() < n; ++seed) {
    for (auto& l : split_lines(simulate_document(Profile::distressed(), 60000, seed))) lines.push_back(std::move(l));
  }
  lines.resize(n);
  return lines;
}

std::vector<EventTrace> make_traces(std::size_t n) {
  std::vector<EventTrace> traces;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    const Profile p = seed % 3 == 0 ? Profile::bot() : seed % 3 == 1 ? Profile::normal() : Profile::distressed();
    EventTrace t;
    for (const Event& e : simulate(p, 120000, seed)) t.append(e);
    traces.push_back(std::move(t));
  }
  return traces;
}

void parse(benchmark::State& state, Exec exec) {
  const auto lines = make_lines(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_lines(lines, ParseMode::Strict, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void analyze(benchmark::State& state, Exec exec) {
  const auto traces = make_traces(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analyze_batch(traces, {}, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ParseSerial(benchmark::State& s) { parse(s, Exec::Serial); }
void BM_ParseParallel(benchmark::State& s) { parse(s, Exec::Parallel); }
void BM_AnalyzeSerial(benchmark::State& s) { analyze(s, Exec::Serial); }
void BM_AnalyzeParallel(benchmark::State& s) { analyze(s, Exec::Parallel); }

BENCHMARK(BM_ParseSerial)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParseParallel)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
