#include <benchmark/benchmark.h>

#include "biwave/adaptive.hpp"
#include "biwave/carve.hpp"
#include "biwave/metrics.hpp"
#include "biwave/phantom.hpp"
#include "biwave/recon.hpp"
#include "biwave/rng.hpp"

using namespace biwave;

namespace {

Scene glyph_scene(int n, double duty) {
    Phantom p;
    p.kind = Phantom::Kind::Glyphs;
    p.duty_ratio = duty;
    p.n = n;
    return generate_phantom(p);
}

void bm_make_basis(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(make_basis(PatternFamily::RowMajorM, n));
}
BENCHMARK(bm_make_basis)->Arg(64)->Arg(256)->Arg(512);

void bm_acquire_full(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Scene s = glyph_scene(n, 0.04);
    Basis b = make_basis(PatternFamily::RowMajorM, n);
    DetectorModel d;
    d.full_scale = calibrate_full_scale(s);
    for (auto _ : state) benchmark::DoNotOptimize(acquire_full(s, b, d));
}
BENCHMARK(bm_acquire_full)->Arg(64)->Arg(128);

void bm_iwt_reconstruct(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Scene s = glyph_scene(n, 0.04);
    Basis b = make_basis(PatternFamily::RowMajorM, n);
    DetectorModel d;
    d.full_scale = calibrate_full_scale(s);
    AcquisitionLog log = acquire_full(s, b, d);
    for (auto _ : state) benchmark::DoNotOptimize(iwt_reconstruct(log, b));
}
BENCHMARK(bm_iwt_reconstruct)->Arg(64)->Arg(128);

void bm_run_adaptive(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Scene s = glyph_scene(n, n >= 256 ? 0.015 : 0.04);
    Basis b = make_basis(PatternFamily::QuadtreeQ, n);
    DetectorModel d;
    d.full_scale = calibrate_full_scale(s);
    for (auto _ : state) benchmark::DoNotOptimize(run_adaptive(s, b, d, {}));
}
BENCHMARK(bm_run_adaptive)->Arg(128)->Arg(512);

void bm_quantize(benchmark::State& state) {
    DetectorModel d;
    d.bits = 8;
    d.full_scale = 100.0;
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(quantize(to_unit(splitmix64(i++)) * 120.0 - 10.0, d));
}
BENCHMARK(bm_quantize);

void bm_ssim(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Image x(n), y(n);
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        x.values[i] = to_unit(mix_key(1, i));
        y.values[i] = to_unit(mix_key(2, i));
    }
    for (auto _ : state) benchmark::DoNotOptimize(ssim(x, y));
}
BENCHMARK(bm_ssim)->Arg(64)->Arg(256);

void bm_carve(benchmark::State& state) {
    const int g = static_cast<int>(state.range(0));
    std::vector<double> angles;
    for (int i = 0; i < 72; ++i) angles.push_back(i * 5.0);
    SilhouetteSet sil = synth_silhouettes(SolidShape::sphere(0.4), angles, 256, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(carve(sil, g, 2.0));
}
BENCHMARK(bm_carve)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
