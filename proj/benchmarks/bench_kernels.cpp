#include <benchmark/benchmark.h>

#include "modvar/census.hpp"
#include "modvar/deform.hpp"
#include "modvar/family.hpp"
#include "modvar/presentation_io.hpp"

using namespace modvar;

namespace {

const PrimeField kF;

std::shared_ptr<const AlgebraPresentation> chain4() {
  static auto p = std::make_shared<AlgebraPresentation>(parse_presentation(
      "algebra chain4\nvertices: 1 2 3 4\narrows: a: 1 -> 2 ; b: 2 -> 3 ; c: 3 -> 4\n"
      "relations: a*b ; b*c\n"));
  return p;
}

ModulePoint<PrimeField> chain_point(int per_vertex, Rng& rng) {
  auto pres = chain4();
  DimVec d{{per_vertex, per_vertex, per_vertex, per_vertex}};
  // a random point of the slice with the middle arrow zero is always valid
  Mat<PrimeField> xa = random_matrix(kF, per_vertex, per_vertex, rng);
  Mat<PrimeField> xb = zero_mat(kF, per_vertex, per_vertex);
  Mat<PrimeField> xc = random_matrix(kF, per_vertex, per_vertex, rng);
  return make_point(pres, kF, d, {xa, xb, xc});
}

void BM_rank(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  Mat<PrimeField> m = random_matrix(kF, n, n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank(kF, m));
  }
}
BENCHMARK(BM_rank)->Arg(50)->Arg(100)->Arg(200);

void BM_hom_dim(benchmark::State& state) {
  Rng rng(2);
  auto m = chain_point(static_cast<int>(state.range(0)), rng);
  auto n = chain_point(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hom_dim(m, n));
}
BENCHMARK(BM_hom_dim)->Arg(2)->Arg(4)->Arg(8);

void BM_der_dim(benchmark::State& state) {
  Rng rng(3);
  auto m = chain_point(static_cast<int>(state.range(0)), rng);
  auto n = chain_point(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(der_dim(m, n));
}
BENCHMARK(BM_der_dim)->Arg(2)->Arg(4)->Arg(8);

void BM_der_dim_reference(benchmark::State& state) {
  Rng rng(4);
  auto m = chain_point(static_cast<int>(state.range(0)), rng);
  auto n = chain_point(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(der_dim_reference(m, n));
}
BENCHMARK(BM_der_dim_reference)->Arg(2)->Arg(3);

void BM_extension_family_dim(benchmark::State& state) {
  auto pres = chain4();
  auto q = make_orbit("q", simple_point(pres, kF, 0));
  auto s = make_orbit("s", simple_point(pres, kF, 1));
  auto fam = make_extfam<PrimeField>("e", q, s);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(family_dim(*fam, rng).saturated);
  }
}
BENCHMARK(BM_extension_family_dim);

void BM_census_der_count(benchmark::State& state) {
  PrimeField f2{2};
  auto pres = chain4();
  Rng rng(5);
  ModulePoint<PrimeField> m = simple_point(pres, f2, 0);
  ModulePoint<PrimeField> n = zero_point(pres, f2, DimVec{{1, 1, 0, 0}});
  for (auto _ : state) benchmark::DoNotOptimize(brute_der_dim(m, n, 1ULL << 24));
}
BENCHMARK(BM_census_der_count);

void BM_triangularize(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  auto ss = std::make_shared<AlgebraPresentation>(
      parse_presentation("algebra ss2\nvertices: 1 2\n"));
  ModulePoint<PrimeField> m =
      direct_sum<PrimeField>({simple_point(ss, kF, 0), simple_point(ss, kF, 1)});
  Rng rng(6);
  TruncatedPoint<PrimeField> tp = constant_deformation(m, order);
  TruncMat<PrimeField> g = tmat_identity(kF, 2, order);
  for (int r = 1; r < order; ++r) g.coeff[static_cast<std::size_t>(r)] =
      random_matrix(kF, 2, 2, rng);
  TruncatedPoint<PrimeField> deformed = conjugate_truncated(tp, g, *tmat_inverse(kF, g));
  SplitData<PrimeField> split = make_split(deformed, 1, 1);
  for (auto _ : state) {
    auto res = triangularize(deformed, split);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_triangularize)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
