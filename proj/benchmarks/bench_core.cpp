#include <benchmark/benchmark.h>

#include <random>

#include "lenodal/functional.hpp"
#include "lenodal/symmetry.hpp"

using namespace lenodal;

namespace {

Field random_field(GridPtr g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Field f = make_field(g);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = dist(rng);
    return f;
}

GridPtr bench_grid(int resolution) {
    return make_grid(GridKind::biradial_2d, 4, 1, 12.0, resolution);
}

} // namespace

static void BM_Laplacian(benchmark::State& state) {
    GridPtr g = bench_grid(static_cast<int>(state.range(0)));
    const Field f = random_field(g, 1);
    for (auto _ : state) benchmark::DoNotOptimize(laplacian(f));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_Laplacian)->Arg(128)->Arg(256);

static void BM_Energy(benchmark::State& state) {
    GridPtr g = bench_grid(static_cast<int>(state.range(0)));
    const Exponents e = hyperbola_from_q(4, Rational(4));
    const Field f = random_field(g, 2);
    for (auto _ : state) benchmark::DoNotOptimize(energy(f, e));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_Energy)->Arg(128)->Arg(256);

static void BM_Gradient(benchmark::State& state) {
    GridPtr g = bench_grid(static_cast<int>(state.range(0)));
    const Exponents e = hyperbola_from_q(4, Rational(4));
    const Field f = random_field(g, 3);
    for (auto _ : state) benchmark::DoNotOptimize(gradient(f, e, 1e-2));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_Gradient)->Arg(128)->Arg(256);

static void BM_Symmetrize(benchmark::State& state) {
    GridPtr g = bench_grid(static_cast<int>(state.range(0)));
    const SymmetrySpec spec = make_spec(4, 1);
    const Field f = random_field(g, 4);
    for (auto _ : state) benchmark::DoNotOptimize(symmetrize(f, spec));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_Symmetrize)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
