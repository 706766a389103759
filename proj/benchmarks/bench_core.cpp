#include <benchmark/benchmark.h>

#include <random>

#include "instances.hpp"
#include "ldeform/combinatorics.hpp"
#include "ldeform/lie.hpp"
#include "ldeform/obstruction.hpp"
#include "ldeform/transport.hpp"

using namespace ldeform;
namespace lt = ldeform::testing;

static void BM_SuperCatalan(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(super_catalan(k));
}
BENCHMARK(BM_SuperCatalan)->Arg(40)->Arg(200);

static void BM_Compositions(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state)
    for (int i = 1; i <= k; ++i) benchmark::DoNotOptimize(nondecreasing_compositions(k, i));
}
BENCHMARK(BM_Compositions)->Arg(12)->Arg(20);

static void BM_VerifyLinftySl2(benchmark::State& state) {
  const auto alg = build_deformation_linfty(lt::sl2());
  for (auto _ : state) benchmark::DoNotOptimize(verify_linfty(alg));
}
BENCHMARK(BM_VerifyLinftySl2)->Unit(benchmark::kMillisecond);

static void BM_ExtendRationalCurve(benchmark::State& state) {
  const auto alg = lt::curve_algebra(lt::Curve::Rational);
  const auto h = homotopy_operators(alg, 1);
  const auto u1 = Element::basis(alg.space(), {0, 0}, Rational(1, 61));
  const auto mode = state.range(1) ? CompositionMode::All : CompositionMode::Representatives;
  for (auto _ : state) benchmark::DoNotOptimize(extend_formal(alg, h, u1, static_cast<int>(state.range(0)), std::nullopt, mode));
}
BENCHMARK(BM_ExtendRationalCurve)->Args({20, 0})->Args({20, 1})->Args({40, 0})->Unit(benchmark::kMillisecond);

static void BM_ExtendSl2(benchmark::State& state) {
  const auto alg = build_deformation_linfty(lt::sl2());
  const auto h = homotopy_operators(alg, 1);
  const auto u1 = lt::cocycles(alg).at(0);
  for (auto _ : state) benchmark::DoNotOptimize(extend_formal(alg, h, u1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExtendSl2)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Twist(benchmark::State& state) {
  std::mt19937 rng(1);
  const auto alg = lt::random_two_level(rng, 3, 3, 4, true);
  const auto u = lt::random_in_degree(rng, alg.space(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(twist(alg, u));
}
BENCHMARK(BM_Twist);

static void BM_TaylorSubstitution(benchmark::State& state) {
  std::mt19937 rng(2);
  const auto alg = lt::random_two_level(rng, 3, 3, 4, true);
  FormalSeries s;
  for (int k = 0; k <= 6; ++k) s.coeffs.push_back(lt::random_in_degree(rng, alg.space(), 0));
  const auto route = state.range(0) ? TaylorRoute::Substitution : TaylorRoute::Obstruction;
  for (auto _ : state) benchmark::DoNotOptimize(taylor_mc(alg, s, 6, route));
}
BENCHMARK(BM_TaylorSubstitution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_TransportSl2(benchmark::State& state) {
  const auto mu = lt::sl2();
  const auto h = *rigidity_check(mu).homotopy;
  FloatMatrix A(3, 3);
  A(0, 1) = 0.05;
  A(1, 2) = -0.03;
  A(2, 0) = 0.02;
  const auto path = DeformationPath::orbit(to_float(mu), A);
  for (auto _ : state) benchmark::DoNotOptimize(parallel_transport(path, mu, h, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TransportSl2)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
