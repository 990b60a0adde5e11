#include <benchmark/benchmark.h>

#include "spinbath/lindblad.hpp"
#include "spinbath/model.hpp"
#include "spinbath/rqi.hpp"
#include "spinbath/sampling.hpp"
#include "spinbath/steady.hpp"
#include "spinbath/thermo.hpp"

using namespace spinbath;

namespace {

LindbladModel two_ended_model(int n) {
  if (n == 1) return make_model(default_chain(1), {make_bath(1, 0.5)});
  return make_model(default_chain(n), {make_bath(1, 0.5), make_bath(n, 1.0)});
}

Matrix seeded_hermitian(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_hermitian(dim, rng);
}

void bm_apply_generator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  const Matrix x = seeded_hermitian(static_cast<int>(chain_dim(n)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_generator(m, x, Picture::schrodinger));
  }
}
BENCHMARK(bm_apply_generator)->DenseRange(2, 6);

void bm_superoperator_assembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(superoperator(m, Picture::schrodinger));
  }
}
BENCHMARK(bm_superoperator_assembly)->DenseRange(2, 4);

void bm_stationary_kernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_state(m));
  }
}
BENCHMARK(bm_stationary_kernel)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void bm_spectral_gap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_gap(m));
  }
}
BENCHMARK(bm_spectral_gap)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void bm_propagator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagator(m, 1.0));
  }
}
BENCHMARK(bm_propagator)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void bm_evolve_adaptive(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  const long d = chain_dim(n);
  const Matrix rho0 = Matrix::Identity(d, d) / static_cast<double>(d);
  EvolveOptions opts;
  opts.method = EvolveMethod::adaptive_rk;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(m, rho0, 1.0, opts));
  }
}
BENCHMARK(bm_evolve_adaptive)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void bm_gns_blocks(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  const InteractionSetup setup = make_setup(m.chain, m.baths, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gns_blocks(setup));
  }
}
BENCHMARK(bm_gns_blocks)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void bm_discrete_map(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = two_ended_model(n);
  const RqiBlocks blocks = gns_blocks(make_setup(m.chain, m.baths, 1e-3));
  const Matrix x = seeded_hermitian(static_cast<int>(chain_dim(n)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discrete_map(blocks, x));
  }
}
BENCHMARK(bm_discrete_map)->DenseRange(1, 3);

void bm_entropy_closed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladModel m = make_model(
      default_chain(n), {make_bath(1, 0.8), make_bath(n, 0.8)});
  SplitMix64 rng(13);
  const Matrix rho = random_faithful_density(static_cast<int>(chain_dim(n)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_production_closed(m, rho));
  }
}
BENCHMARK(bm_entropy_closed)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void bm_detailed_balance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<BathSpec> baths;
  for (int k = 1; k <= n; ++k) baths.push_back(make_bath(k, 0.8));
  const LindbladModel m = make_model(default_chain(n), baths);
  const Matrix ref = reference_state(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(detailed_balance_certificate(m, ref));
  }
}
BENCHMARK(bm_detailed_balance)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
