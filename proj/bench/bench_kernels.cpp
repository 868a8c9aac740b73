// Serial reference vs OpenMP kernels on solver-shaped workloads.
// Run: ./bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "subic/kernels.hpp"
#include "subic/parallel.hpp"
#include "subic/weights.hpp"

namespace {

subic::Mat random_matrix(int n, int p, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  subic::Mat X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = u(eng);
  return X;
}

// a dense-ish pair set comparable to a kNN graph on m items
std::vector<subic::WPair> make_pairs(int m, int k, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<subic::WPair> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < std::min(m, i + 1 + k); ++j) {
      subic::WPair pr;
      pr.i = i;
      pr.j = j;
      pr.weight = u(eng);
      pairs.push_back(pr);
    }
  return pairs;
}

void bench_col_sqdist(benchmark::State& state, subic::par::Mode mode) {
  subic::par::set_mode(mode);
  auto X = random_matrix(200, 400, 7);
  for (auto _ : state) benchmark::DoNotOptimize(subic::kernels::col_sqdist(X));
}

void bench_col_deltas(benchmark::State& state, subic::par::Mode mode) {
  subic::par::set_mode(mode);
  auto X = random_matrix(400, 400, 7);
  auto pairs = make_pairs(400, 10, 11);
  subic::Mat out(400, static_cast<int>(pairs.size()));
  for (auto _ : state) {
    subic::kernels::col_deltas(X, pairs, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void bench_scatter_cols(benchmark::State& state, subic::par::Mode mode) {
  subic::par::set_mode(mode);
  auto pairs = make_pairs(400, 10, 11);
  auto inc = subic::kernels::PairIncidence::build(400, pairs);
  auto Z = random_matrix(400, static_cast<int>(pairs.size()), 13);
  subic::Mat out(400, 400);
  for (auto _ : state) {
    out.setZero();
    subic::kernels::scatter_cols(Z, inc, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void bench_shrink_dual(benchmark::State& state, subic::par::Mode mode) {
  subic::par::set_mode(mode);
  auto pairs = make_pairs(400, 10, 11);
  auto E = random_matrix(400, static_cast<int>(pairs.size()), 17);
  subic::Mat V = E, M = subic::Mat::Zero(E.rows(), E.cols());
  for (auto _ : state) {
    auto st = subic::kernels::shrink_dual(E, 0.05, 2.0, 2.0, V, M);
    benchmark::DoNotOptimize(st);
  }
}

}  // namespace

BENCHMARK_CAPTURE(bench_col_sqdist, serial, subic::par::Mode::serial);
BENCHMARK_CAPTURE(bench_col_sqdist, openmp, subic::par::Mode::openmp);
BENCHMARK_CAPTURE(bench_col_deltas, serial, subic::par::Mode::serial);
BENCHMARK_CAPTURE(bench_col_deltas, openmp, subic::par::Mode::openmp);
BENCHMARK_CAPTURE(bench_scatter_cols, serial, subic::par::Mode::serial);
BENCHMARK_CAPTURE(bench_scatter_cols, openmp, subic::par::Mode::openmp);
BENCHMARK_CAPTURE(bench_shrink_dual, serial, subic::par::Mode::serial);
BENCHMARK_CAPTURE(bench_shrink_dual, openmp, subic::par::Mode::openmp);

BENCHMARK_MAIN();
