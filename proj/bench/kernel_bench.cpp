// Serial reference kernels against their OpenMP counterparts at desk scale
// (T = 10000 samples, W = 150) and at a longer recording length.

#include <benchmark/benchmark.h>

#include <random>

#include "cscpct/kernels.hpp"

namespace {

using namespace cscpct;

struct Inputs {
  std::vector<double> x;
  Dictionary d;
  Activations z;
  std::vector<SparseMap> sparse;
};

Inputs make_inputs(std::size_t t_len, std::size_t k, std::size_t w) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::bernoulli_distribution keep(0.02);
  Inputs in{std::vector<double>(t_len), Dictionary(k, w), Activations(k, t_len - w + 1), {}};
  for (double& v : in.x) v = g(rng);
  for (double& v : in.d.flat()) v = g(rng) / std::sqrt(static_cast<double>(w));
  for (double& v : in.z.flat())
    if (keep(rng)) v = g(rng);
  in.sparse = to_sparse(in.z);
  return in;
}

template <auto Fn>
void bm_correlate_atoms(benchmark::State& state) {
  const auto in = make_inputs(state.range(0), state.range(1), 150);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.x, in.d));
}

template <auto Fn>
void bm_reconstruction(benchmark::State& state) {
  const auto in = make_inputs(state.range(0), state.range(1), 150);
  std::vector<double> out(in.x.size());
  for (auto _ : state) {
    std::fill(out.begin(), out.end(), 0.0);
    Fn(in.d, in.sparse, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Fn>
void bm_correlate_activations(benchmark::State& state) {
  const auto in = make_inputs(state.range(0), state.range(1), 150);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.sparse, in.x, 150));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long t : {10000L, 100000L})
    for (long k : {1L, 4L}) b->Args({t, k});
}

}  // namespace

BENCHMARK(bm_correlate_atoms<&serial::correlate_atoms>)->Apply(sizes)->Name("correlate_atoms/serial");
BENCHMARK(bm_correlate_atoms<&omp::correlate_atoms>)->Apply(sizes)->Name("correlate_atoms/omp");
BENCHMARK(bm_reconstruction<&serial::accumulate_reconstruction>)->Apply(sizes)->Name("reconstruction/serial");
BENCHMARK(bm_reconstruction<&omp::accumulate_reconstruction>)->Apply(sizes)->Name("reconstruction/omp");
BENCHMARK(bm_correlate_activations<&serial::correlate_activations>)->Apply(sizes)->Name("correlate_activations/serial");
BENCHMARK(bm_correlate_activations<&omp::correlate_activations>)->Apply(sizes)->Name("correlate_activations/omp");

BENCHMARK_MAIN();
