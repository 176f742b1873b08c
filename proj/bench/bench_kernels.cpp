// Serial reference kernels against the OpenMP ones, plus a small end-to-end rate sweep.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "ris/kernels.hpp"
#include "ris/simulation.hpp"

namespace {

using namespace ris;

struct Fixture {
    ArrayModel array{40, 0.25};
    KnownBsRisChannel h = KnownBsRisChannel::unit(40);
    PilotCampaign campaign = PilotCampaign::empty(10.0, KnownBsRisChannel::unit(40));
    AoaSearchGrid grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, 2);
    CMatrix steering;

    Fixture(int grid_points, int pilots) {
        Rng rng = derive_stream(7, 0);
        h = KnownBsRisChannel::random_unit_phases(40, rng);
        grid = AoaSearchGrid::uniform(-kHalfPi, kHalfPi, grid_points);
        const CMatrix b = random_dft_configurations(40, pilots, rng);
        CVector y(pilots);
        for (int l = 0; l < pilots; ++l) y[l] = complex_gaussian(1.0, rng);
        campaign = PilotCampaign(b, y, 10.0, h);
        steering = kernels::steering_table(h, array, grid.points());
    }
};

void BM_UtilitySerial(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::utility_serial(f.campaign, f.array, f.grid.points()));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_UtilityOmp(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::utility_omp(f.campaign, f.steering));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ProjectRowsSerial(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)), 40);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::project_rows_serial(f.campaign.config_matrix(), f.steering));
    }
}

void BM_ProjectRowsOmp(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)), 40);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::project_rows_omp(f.campaign.config_matrix(), f.steering));
    }
}

void BM_AccumulatorPilot(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)), 1);
    const CMatrix proj = kernels::project_rows_omp(f.campaign.config_matrix(), f.steering);
    const CVector row = proj.row(0).transpose();
    kernels::UtilityAccumulator acc(f.grid.size(), 1600.0);
    for (auto _ : state) {
        acc.add_pilot(std::span<const cplx>(row.data(), f.grid.size()), f.campaign.received()[0]);
        benchmark::DoNotOptimize(acc.field());
    }
}

void BM_RateSweep(benchmark::State& state) {
    ExperimentConfig c;
    c.num_trials = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_rate_experiment(c));
    }
    state.counters["threads"] = omp_get_max_threads();
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_UtilitySerial)->Arg(500)->Arg(2000)->Arg(8000);
BENCHMARK(BM_UtilityOmp)->Arg(500)->Arg(2000)->Arg(8000);
BENCHMARK(BM_ProjectRowsSerial)->Arg(2000);
BENCHMARK(BM_ProjectRowsOmp)->Arg(2000);
BENCHMARK(BM_AccumulatorPilot)->Arg(2000)->Arg(8000);
BENCHMARK(BM_RateSweep)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
