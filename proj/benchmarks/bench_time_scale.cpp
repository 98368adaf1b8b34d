#include <benchmark/benchmark.h>

#include "esola/analysis.hpp"
#include "esola/baselines.hpp"
#include "esola/pitch_scaling.hpp"
#include "esola/tsm.hpp"
#include "esola/zff.hpp"
#include "../tests/support/signals.hpp"

namespace {

const esola::AudioBuffer& ten_second_proxy() {
    static const esola::AudioBuffer buf =
        esola::testing::voiced_proxy(120.0, 10.0, 16000).audio;
    return buf;
}

const esola::EpochMarks& proxy_marks() {
    static const esola::EpochMarks marks = esola::extract_epochs(ten_second_proxy());
    return marks;
}

// args: alpha in percent (50 .. 200)

void BM_ExtractEpochs(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    for (auto _ : state) {
        auto marks = esola::extract_epochs(buf);
        benchmark::DoNotOptimize(marks);
    }
}
BENCHMARK(BM_ExtractEpochs);

void BM_TimeScaleEsola(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    const auto& marks = proxy_marks();
    const double alpha = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto out = esola::time_scale(buf, marks, alpha);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_TimeScaleEsola)->Arg(50)->Arg(125)->Arg(200);

void BM_TimeScaleEsolaWithExtraction(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    const double alpha = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto marks = esola::extract_epochs(buf);
        auto out = esola::time_scale(buf, marks, alpha);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_TimeScaleEsolaWithExtraction)->Arg(50)->Arg(125)->Arg(200);

void BM_TimeScaleOla(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    const double alpha = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto out = esola::ola_time_scale(buf, alpha);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_TimeScaleOla)->Arg(50)->Arg(125)->Arg(200);

void BM_TimeScaleSolafs(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    const double alpha = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto out = esola::solafs_time_scale(buf, alpha);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_TimeScaleSolafs)->Arg(50)->Arg(125)->Arg(200);

void BM_PitchScale(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    const auto& marks = proxy_marks();
    const double beta = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto out = esola::pitch_scale(buf, marks, beta);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_PitchScale)->Arg(75)->Arg(125);

void BM_Resample(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    esola::ResampleSpec spec;
    spec.ratio = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto out = esola::resample(buf, spec);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_Resample)->Arg(50)->Arg(200);

void BM_F0Track(benchmark::State& state) {
    const auto& buf = ten_second_proxy();
    for (auto _ : state) {
        auto track = esola::estimate_f0_track(buf);
        benchmark::DoNotOptimize(track);
    }
}
BENCHMARK(BM_F0Track);

} // namespace

BENCHMARK_MAIN();
