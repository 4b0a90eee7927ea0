#include <benchmark/benchmark.h>

#include <random>

#include "wedgefill/baselines.hpp"
#include "wedgefill/joint_energy.hpp"
#include "wedgefill/phantoms.hpp"
#include "wedgefill/projector.hpp"
#include "wedgefill/regularizers.hpp"
#include "wedgefill/solvers.hpp"

using namespace wedgefill;

namespace {

Image make_image(int n) { return shepp_logan_modified(n, n); }

ProjectionGeometry make_geometry(int n) {
    return uniform_geometry(180, 0.0, 1.0, default_detector_count(n, n), 1.0);
}

}  // namespace

static void BM_ForwardProject(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Image u = make_image(n);
    ProjectionGeometry g = make_geometry(n);
    for (auto _ : state) benchmark::DoNotOptimize(forward_project(u, g));
    state.SetItemsProcessed(state.iterations() * g.angle_count() * g.detector_count);
}
BENCHMARK(BM_ForwardProject)->Arg(64)->Arg(128)->Arg(256);

static void BM_BackProject(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ProjectionGeometry g = make_geometry(n);
    Sinogram s = forward_project(make_image(n), g);
    for (auto _ : state) benchmark::DoNotOptimize(back_project(s, n, n, 1.0));
}
BENCHMARK(BM_BackProject)->Arg(64)->Arg(128)->Arg(256);

static void BM_GaussianBlur(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Array2 f(n, n);
    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    for (double& v : f.v) v = nd(rng);
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(f, 8.0));
}
BENCHMARK(BM_GaussianBlur)->Arg(128)->Arg(512);

static void BM_AnisotropyTensor(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Image u = make_image(n);
    AnisotropyParams p;
    for (auto _ : state) benchmark::DoNotOptimize(anisotropy_tensor(u.values, p));
}
BENCHMARK(BM_AnisotropyTensor)->Arg(64)->Arg(256);

static void BM_Fbp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ProjectionGeometry g = make_geometry(n);
    Sinogram s = forward_project(make_image(n), g);
    SampleMask m = full_mask(g);
    for (auto _ : state) benchmark::DoNotOptimize(fbp(s, m, n, n));
}
BENCHMARK(BM_Fbp)->Arg(64)->Arg(256);

static void BM_TvReconstruct(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ProjectionGeometry g = make_geometry(n);
    Sinogram s = forward_project(make_image(n), g);
    SampleMask m = full_mask(g);
    TvReconOptions opt;
    opt.iters = 50;
    opt.tol = 0.0;
    for (auto _ : state) benchmark::DoNotOptimize(tv_reconstruct(s, m, n, n, 1e-4, opt));
}
BENCHMARK(BM_TvReconstruct)->Arg(32)->Arg(64);

static void BM_JointIteration(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Image truth = make_image(n);
    ProjectionGeometry g = make_geometry(n);
    Sinogram b = forward_project(truth, g);
    SampleMask m = full_mask(g);
    JointParams p;
    p.beta2 = 100.0;
    p.sigma = 3.0;
    p.tau_x = 0.05;
    p.tau_y = 0.05;
    p.iters = 1;
    p.inner_iters = 30;
    Image u0 = sirt(b, m, n, n, 20);
    for (auto _ : state) benchmark::DoNotOptimize(run_joint(u0, b, b, m, p));
}
BENCHMARK(BM_JointIteration)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
