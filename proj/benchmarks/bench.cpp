#include <benchmark/benchmark.h>

#include "corpus.hpp"
#include "oscal/extraction.hpp"
#include "oscal/oracle.hpp"
#include "oscal/seqlab.hpp"
#include "oscal/transfinite.hpp"

namespace {

using namespace oscal;

const std::vector<QFunction>& corpus() {
  static const std::vector<QFunction> c = testing::function_corpus(200);
  return c;
}

void BM_FormulaNorm(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& f : corpus()) benchmark::DoNotOptimize(d_norm(f));
  }
  state.SetItemsProcessed(state.iterations() * corpus().size());
}
BENCHMARK(BM_FormulaNorm)->Unit(benchmark::kMillisecond);

void BM_OracleNorm(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& f : corpus()) benchmark::DoNotOptimize(oracle_dnorm(f).optimum);
  }
  state.SetItemsProcessed(state.iterations() * corpus().size());
}
BENCHMARK(BM_OracleNorm)->Unit(benchmark::kMillisecond);

void BM_Symmetry(benchmark::State& state) {
  std::size_t k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    for (std::size_t i = 0; i < 20; ++i) benchmark::DoNotOptimize(symmetry_check(corpus()[i], k));
  }
}
BENCHMARK(BM_Symmetry)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_BasisConstant(benchmark::State& state) {
  PolyBasis b = partial_sum_basis(NormKind::Se, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(basis_constant(b));
}
BENCHMARK(BM_BasisConstant)->DenseRange(2, 8, 2);

void BM_ChainRun(benchmark::State& state) {
  FunctionSeq g = testing::k3_sequence();
  for (auto _ : state) benchmark::DoNotOptimize(chain_run(g, 2, 0, Rational(1, 4), {1, 3, 5, 7}).bundle.k);
}
BENCHMARK(BM_ChainRun);

}  // namespace

BENCHMARK_MAIN();
