#include <benchmark/benchmark.h>

#include "lptriple/grouptriple.hpp"
#include "lptriple/qmetric.hpp"
#include "lptriple/uhftriple.hpp"

namespace {

lpt::OperatorMatrix random_op(int n, std::uint64_t seed) {
  lpt::detail::Rng rng(seed);
  lpt::Matrix m(n, n);
  for (int i = 0; i < n * n; ++i) m(i / n, i % n) = rng.complex_normal();
  const auto s = lpt::WeightedPointSpace::counting(n);
  return lpt::OperatorMatrix(s, s, std::move(m));
}

void BM_op_norm_exact_p2(benchmark::State& state) {
  const auto a = random_op(int(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lpt::op_norm(a, lpt::PExponent(2)));
  }
}
BENCHMARK(BM_op_norm_exact_p2)->Arg(8)->Arg(32)->Arg(128);

void BM_op_norm_interval_p3(benchmark::State& state) {
  const auto a = random_op(int(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lpt::op_norm(a, lpt::PExponent(3)));
  }
}
BENCHMARK(BM_op_norm_interval_p3)->Arg(8)->Arg(32)->Arg(128);

void BM_ball_free2(benchmark::State& state) {
  const auto g = lpt::GroupModel::free_group(2);
  const auto len = lpt::LengthFn::builtin(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lpt::ball(g, len, double(state.range(0))));
  }
}
BENCHMARK(BM_ball_free2)->Arg(3)->Arg(5)->Arg(7);

void BM_build_tower(benchmark::State& state) {
  std::vector<int> dims{1};
  for (int i = 0; i < state.range(0); ++i) dims.push_back(2);
  const lpt::UHFSpecConfig spec{dims};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lpt::build_tower(spec));
  }
}
BENCHMARK(BM_build_tower)->Arg(3)->Arg(6)->Arg(9);

void BM_commutator_est(benchmark::State& state) {
  const auto z = lpt::GroupModel::integers();
  const auto len = lpt::LengthFn::builtin(z);
  const auto trunc = lpt::ball(z, len, double(state.range(0)));
  const lpt::GroupAlgElem a(z, {{z.parse("1"), 1.0},
                                {z.parse("-2"), lpt::Complex(0, 1)}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lpt::commutator_norm_est(z, a, trunc, len, lpt::PExponent(1.5)));
  }
}
BENCHMARK(BM_commutator_est)->Arg(8)->Arg(16)->Arg(32);

void BM_mk_lower(benchmark::State& state) {
  const auto t = lpt::build_tower(lpt::UHFSpecConfig{{1, 2, 2}});
  const lpt::AlphaSeq alpha({0.0, 2.0, 4.0});
  const auto p0 = lpt::State::point(t, 0);
  const auto p1 = lpt::State::point(t, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lpt::mk_lower(t, alpha, p0, p1, lpt::PExponent(2)));
  }
}
BENCHMARK(BM_mk_lower);

}  // namespace

BENCHMARK_MAIN();
