#include <benchmark/benchmark.h>

#include <numbers>

#include "qem/fit.hpp"
#include "qem/linalg.hpp"
#include "qem/model.hpp"

namespace {

qem::ModelParams sample_params() {
    qem::ModelParams p;
    p.nu = -0.69;
    p.nu_prime = 0.40;
    p.gamma = 0.31;
    p.gamma_prime[qem::WordClass::HFC] = -0.01;
    p.gamma_prime[qem::WordClass::HFA] = 0.02;
    p.gamma_prime[qem::WordClass::LFC] = 0.03;
    p.gamma_prime[qem::WordClass::LFA] = 0.10;
    p.kappa = -0.46;
    return p;
}

void BM_Propagator(benchmark::State& state) {
    const qem::ModelParams p = sample_params();
    const auto h = qem::cue_hamiltonian(qem::Cue::L1, qem::drivers_for(p, qem::WordClass::HFC));
    for (auto _ : state) benchmark::DoNotOptimize(qem::propagator(h, std::numbers::pi / 2));
}
BENCHMARK(BM_Propagator);

void BM_TaylorPropagator(benchmark::State& state) {
    const qem::ModelParams p = sample_params();
    const auto h = qem::cue_hamiltonian(qem::Cue::L1, qem::drivers_for(p, qem::WordClass::HFC));
    for (auto _ : state) benchmark::DoNotOptimize(qem::taylor_propagator(h, std::numbers::pi / 2));
}
BENCHMARK(BM_TaylorPropagator);

void BM_PredictTable(benchmark::State& state) {
    const qem::ModelParams p = sample_params();
    for (auto _ : state) benchmark::DoNotOptimize(qem::predict_table(p));
}
BENCHMARK(BM_PredictTable);

void BM_Objective(benchmark::State& state) {
    const qem::ModelParams p = sample_params();
    const auto obs = qem::ObservedDataset::from_predictions(qem::predict_table(p));
    qem::ModelParams q = p;
    q.kappa = -0.40;
    for (auto _ : state) benchmark::DoNotOptimize(qem::objective(q, obs));
}
BENCHMARK(BM_Objective);

}  // namespace

BENCHMARK_MAIN();
