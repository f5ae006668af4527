#include <benchmark/benchmark.h>

#include "sarsim/inpaint.hpp"
#include "sarsim/raster.hpp"
#include "sarsim/reference.hpp"
#include "sarsim/rng.hpp"
#include "sarsim/tre.hpp"

namespace {

sarsim::IntensityRaster speckled_image(int w, int h, std::uint64_t seed) {
  auto img = sarsim::sample_speckle(w, h, 4, seed);
  for (auto& v : img.pixels()) v *= 0.5f;
  return img;
}

sarsim::TREParams bench_params() {
  sarsim::TREParams p;
  p.diffusion_iterations = 10;
  return p;
}

void BM_DiffusionSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto img = speckled_image(n, n, 1);
  auto params = bench_params();
  sarsim::BinaryMask domain(n, n, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sarsim::reference::anisotropic_diffusion(img, domain, params));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()) *
                          params.diffusion_iterations);
}

void BM_DiffusionParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto img = speckled_image(n, n, 1);
  auto params = bench_params();
  sarsim::BinaryMask domain(n, n, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sarsim::anisotropic_diffusion(img, domain, params));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()) *
                          params.diffusion_iterations);
}

void BM_SpeckleSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sarsim::reference::sample_speckle(n, n, 4, 7));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_SpeckleParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sarsim::sample_speckle(n, n, 4, 7));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_DriftSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sarsim::TREParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sarsim::reference::sample_drift(n, n, params, 9));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_DriftParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sarsim::TREParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sarsim::sample_drift(n, n, params, 9));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

struct FillFixture {
  sarsim::IntensityRaster img;
  sarsim::BinaryMask mask;
  sarsim::NearestNeighborField nnf;
  sarsim::PatchSpec spec;
};

FillFixture fill_fixture(int n) {
  FillFixture f{speckled_image(n, n, 3), sarsim::BinaryMask(n, n, false),
                sarsim::NearestNeighborField(n, n), {}};
  for (int y = n / 4; y < n / 2; ++y)
    for (int x = n / 4; x < n / 2; ++x) f.mask.set(x, y, true);
  f.nnf = sarsim::patchmatch(f.img, f.mask, f.spec, 2, 5);
  return f;
}

void BM_FillSerial(benchmark::State& state) {
  auto f = fill_fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sarsim::reference::fill_from_nnf(f.img, f.mask, f.nnf, f.spec));
  }
  state.SetItemsProcessed(state.iterations() * f.mask.count());
}

void BM_FillParallel(benchmark::State& state) {
  auto f = fill_fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sarsim::fill_from_nnf(f.img, f.mask, f.nnf, f.spec));
  }
  state.SetItemsProcessed(state.iterations() * f.mask.count());
}

}  // namespace

BENCHMARK(BM_DiffusionSerial)->Arg(256)->Arg(512);
BENCHMARK(BM_DiffusionParallel)->Arg(256)->Arg(512);
BENCHMARK(BM_SpeckleSerial)->Arg(512)->Arg(1024);
BENCHMARK(BM_SpeckleParallel)->Arg(512)->Arg(1024);
BENCHMARK(BM_DriftSerial)->Arg(256)->Arg(512);
BENCHMARK(BM_DriftParallel)->Arg(256)->Arg(512);
BENCHMARK(BM_FillSerial)->Arg(128)->Arg(256);
BENCHMARK(BM_FillParallel)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
