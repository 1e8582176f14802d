// SPDX-License-Identifier: Apache-2.0
#include "gae/classify.hpp"
#include "gae/data_io.hpp"
#include "gae/energy.hpp"
#include "gae/gae_core.hpp"
#include "gae/rbm_oracle.hpp"
#include "gae/training.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace gae;

// Square model of size n: D = L = F = M = n.
GaeParams model(Index n, bool tied = false) {
  return init_gae(n, n, n, n, Activation::sigmoid, 7, tied);
}

Vector probe(Index n, double phase) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = std::sin(0.37 * static_cast<double>(i) + phase);
  return v;
}

void BM_Encode(benchmark::State& state) {
  const Index n = state.range(0);
  const GaeParams p = model(n);
  const Vector x = probe(n, 0.1), y = probe(n, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(encode(p, x, y));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Encode)->RangeMultiplier(4)->Range(16, 256);

void BM_EnergyConditional(benchmark::State& state) {
  const Index n = state.range(0);
  const GaeParams p = model(n);
  const Vector x = probe(n, 0.1), y = probe(n, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(energy_conditional(p, x, y).value);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnergyConditional)->RangeMultiplier(4)->Range(16, 256);

void BM_VectorField(benchmark::State& state) {
  const Index n = state.range(0);
  const GaeParams p = model(n);
  const Vector x = probe(n, 0.1), y = probe(n, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(vector_field(p, x, y, Target::y));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_VectorField)->RangeMultiplier(4)->Range(16, 256);

void BM_EnergyCovariance(benchmark::State& state) {
  const Index n = state.range(0);
  const GaeParams p = model(n, true);
  const Vector x = probe(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(energy_covariance(p, x).value);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnergyCovariance)->RangeMultiplier(4)->Range(16, 256);

void BM_FcrbmFreeEnergy(benchmark::State& state) {
  const Index n = state.range(0);
  const rbm::FcrbmParams q = rbm::fcrbm_from_gae(model(n));
  const Vector x = probe(n, 0.1), y = probe(n, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(rbm::fcrbm_free_energy(q, x, y));
}
BENCHMARK(BM_FcrbmFreeEnergy)->RangeMultiplier(4)->Range(16, 256);

void BM_LossGradients(benchmark::State& state) {
  const Index n = 32;
  const Index batch = state.range(0);
  const GaeParams p = model(n);
  RowMatrix xs(batch, n), ys(batch, n);
  for (Index i = 0; i < batch; ++i) {
    xs.row(i) = probe(n, 0.01 * static_cast<double>(i)).transpose();
    ys.row(i) = probe(n, 1.0 + 0.02 * static_cast<double>(i)).transpose();
  }
  for (auto _ : state) benchmark::DoNotOptimize(loss_gradients(p, xs, ys, LossMode::symmetric));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_LossGradients)->Arg(32)->Arg(256);

void BM_ClassScores(benchmark::State& state) {
  const Index n = 16;
  ClassifierEnsemble ens;
  for (int k = 0; k < 10; ++k) {
    ens.members.push_back({init_mean_ae(n, 32, static_cast<std::uint64_t>(k)),
                           init_gae(n, n, 32, 32, Activation::sigmoid, static_cast<std::uint64_t>(k), true)});
  }
  ens.biases = Vector::Zero(10);
  const Vector x = probe(n, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(class_scores(ens, x));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ClassScores);

}  // namespace

BENCHMARK_MAIN();
