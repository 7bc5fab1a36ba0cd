#include <vector>

#include <benchmark/benchmark.h>

#include "stereoloc/config.hpp"
#include "stereoloc/evaluation.hpp"
#include "stereoloc/pipeline.hpp"

namespace {

using namespace stereoloc;

struct Workload {
    StereoRig rig;
    std::vector<StereoFrame> frames;
};

const Workload& workload(int drones) {
    static std::vector<Workload> cache(16);
    Workload& w = cache.at(drones);
    if (w.frames.empty()) {
        w.rig = default_rig();
        w.frames = make_bench_workload(drones, 4096, 1, w.rig).stereo_frames();
    }
    return w;
}

void BM_LocalizeSerial(benchmark::State& state) {
    const auto& w = workload(static_cast<int>(state.range(0)));
    const std::vector<StereoRig> rigs{w.rig};
    for (auto _ : state)
        benchmark::DoNotOptimize(localize_stream_serial(w.frames, rigs, {}));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.frames.size()));
}

void BM_LocalizeOpenMP(benchmark::State& state) {
    const auto& w = workload(static_cast<int>(state.range(0)));
    const std::vector<StereoRig> rigs{w.rig};
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(localize_stream(w.frames, rigs, {}, threads));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.frames.size()));
}

void BM_Associate(benchmark::State& state) {
    const auto& w = workload(static_cast<int>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(associate(w.frames[i], w.rig.intrinsics, {}));
        i = (i + 1) % w.frames.size();
    }
    state.SetItemsProcessed(state.iterations());
}

BENCHMARK(BM_LocalizeSerial)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalizeOpenMP)
    ->ArgsProduct({{1, 5, 10}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_Associate)->Arg(1)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
