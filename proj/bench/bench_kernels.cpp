#include <benchmark/benchmark.h>
#include <omp.h>

#include "acet/kernels.hpp"
#include "acet/synth.hpp"
#include "acet/tracker.hpp"

using namespace acet;

namespace {

// A tracker a few frames into the plain-motion sequence, plus the samples of
// its last step.
struct Fixture {
  Sequence seq;
  TrackerState state;
  std::vector<Sample> samples;

  Fixture() : seq(synth_generate(standard_suite(1)[0])) {
    state = init_tracker(*seq.frame(0), seq.ground_truth()[0], EnsembleConfig{}, 1);
    for (std::size_t k = 1; k <= 4; ++k) step(state, *seq.frame(k), &samples);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

using ExtractFn = void (*)(const Frame&, std::span<Sample>);
using ScoreFn = void (*)(std::span<Sample>, std::span<const MemberState>);
using UpdateFn = void (*)(std::span<MemberState>, std::span<const std::uint8_t>, int);

void run_extract(benchmark::State& st, ExtractFn fn) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  const Fixture& f = fixture();
  auto samples = f.samples;
  for (auto _ : st) {
    fn(*f.seq.frame(5), samples);
    benchmark::DoNotOptimize(samples.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(samples.size()));
}

void run_score(benchmark::State& st, ScoreFn fn) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  const Fixture& f = fixture();
  auto samples = f.samples;
  for (auto _ : st) {
    fn(samples, f.state.members);
    benchmark::DoNotOptimize(samples.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(samples.size()));
}

void run_update(benchmark::State& st, UpdateFn fn) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  const Fixture& f = fixture();
  const std::vector<std::uint8_t> active(f.state.members.size(), 1);
  for (auto _ : st) {
    st.PauseTiming();
    auto members = f.state.members;
    st.ResumeTiming();
    fn(members, active, f.state.config.classifier.epochs);
    benchmark::DoNotOptimize(members.data());
  }
}

void BM_ExtractSerial(benchmark::State& st) { run_extract(st, kernels::serial::extract_features); }
void BM_ExtractOmp(benchmark::State& st) { run_extract(st, kernels::omp::extract_features); }
void BM_ScoreSerial(benchmark::State& st) { run_score(st, kernels::serial::score_members); }
void BM_ScoreOmp(benchmark::State& st) { run_score(st, kernels::omp::score_members); }
void BM_UpdateSerial(benchmark::State& st) { run_update(st, kernels::serial::update_members); }
void BM_UpdateOmp(benchmark::State& st) { run_update(st, kernels::omp::update_members); }

}  // namespace

BENCHMARK(BM_ExtractSerial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExtractOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreSerial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_UpdateSerial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_UpdateOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
