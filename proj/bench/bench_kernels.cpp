// Serial reference against the OpenMP kernels. Run with
//   ./build/bench/bench_kernels --benchmark_filter=Apply
// and set OMP_NUM_THREADS to vary the parallel side.

#include <benchmark/benchmark.h>

#include <random>

#include "obtuse_walks/classicality.hpp"
#include "obtuse_walks/kernels.hpp"
#include "obtuse_walks/walk.hpp"

namespace {

using namespace obtuse_walks;

void BM_KronSerial(benchmark::State& state) {
  const auto n = state.range(0);
  const ComplexMatrix a = ComplexMatrix::Random(n, n);
  const ComplexMatrix b = ComplexMatrix::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::kron_serial(a, b));
}

void BM_KronParallel(benchmark::State& state) {
  const auto n = state.range(0);
  const ComplexMatrix a = ComplexMatrix::Random(n, n);
  const ComplexMatrix b = ComplexMatrix::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::kron_parallel(a, b));
}

// Local U on (H_0, middle site) of a chain with d = 2, s = 3.
template <bool Parallel>
void BM_ApplyLocal(benchmark::State& state) {
  const kernels::ChainShape shape{2, 3, static_cast<int>(state.range(0))};
  std::mt19937_64 rng(1);
  const ComplexMatrix local = random_unitary(6, rng);
  const ComplexMatrix start = ComplexMatrix::Identity(shape.dim(), shape.dim());
  const int site = (shape.sites + 1) / 2;
  for (auto _ : state) {
    ComplexMatrix v = start;
    if constexpr (Parallel) {
      kernels::apply_local_parallel(local, shape, site, v);
    } else {
      kernels::apply_local_serial(local, shape, site, v);
    }
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["dim"] = static_cast<double>(shape.dim());
}

template <bool Parallel>
void BM_Batch(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto x = generate_obtuse(2, std::nullopt, 3);
  std::vector<ComplexMatrix> w;
  for (int l = 0; l < 3; ++l) w.push_back(random_unitary(4, rng));
  const auto form = make_classical_form(w, x);
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(simulate_batch_parallel(form, 32, 7, count));
    } else {
      benchmark::DoNotOptimize(simulate_batch_serial(form, 32, 7, count));
    }
  }
}

BENCHMARK(BM_KronSerial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_KronParallel)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_ApplyLocal<false>)->Name("BM_ApplyLocalSerial")->DenseRange(2, 5);
BENCHMARK(BM_ApplyLocal<true>)->Name("BM_ApplyLocalParallel")->DenseRange(2, 5);
BENCHMARK(BM_Batch<false>)->Name("BM_BatchSerial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_Batch<true>)->Name("BM_BatchParallel")->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
