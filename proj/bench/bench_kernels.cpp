// Serial reference kernels against their parallel counterparts.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "bob/dyadic.hpp"
#include "bob/kernels.hpp"

namespace {

using namespace bob;

SpaceTimeSpectral random_field(std::size_t n, std::size_t m, unsigned seed) {
  const Grid g = Grid::make(8.0, n);
  const TimeAxis t = TimeAxis::make(-4.0, 8.0, m);
  SpaceTimeSpectral f = SpaceTimeSpectral::zeros(g, t);
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise;
  for (auto& c : f.coeffs) c = {noise(rng), noise(rng)};
  return f;
}

kernels::Multiplier modulation_window() {
  return [](double xi, double tau) -> cplx { return dyadic::eta(2, tau - dyadic::omega(xi)); };
}

void BM_l1x_l2t_serial(benchmark::State& st) {
  const auto f = random_field(64, st.range(0), 1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::l1x_l2t_serial(f, modulation_window()));
}
void BM_l1x_l2t_parallel(benchmark::State& st) {
  const auto f = random_field(64, st.range(0), 1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::l1x_l2t_parallel(f, modulation_window()));
}

kernels::BlockMap modulation_blocks() {
  return [](double xi, double tau, kernels::CellBlocks& out) {
    const double mu = std::abs(tau - dyadic::omega(xi));
    const int j = mu < 1.0 ? 0 : std::min(7, static_cast<int>(std::log2(mu)) + 1);
    out.add(j, 1.0);
  };
}

void BM_block_energy_serial(benchmark::State& st) {
  const auto f = random_field(64, st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::block_energy_serial(f, 8, modulation_blocks()));
}
void BM_block_energy_parallel(benchmark::State& st) {
  const auto f = random_field(64, st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::block_energy_parallel(f, 8, modulation_blocks()));
}

kernels::Slices duhamel_input(std::size_t nodes, std::vector<cplx>& lambda) {
  const Grid g = Grid::make(16.0, 128);
  lambda.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.wavenumber(i);
    lambda[i] = {-0.01 * xi * xi, dyadic::omega(xi)};
  }
  kernels::Slices s(nodes + 1, std::vector<cplx>(g.size()));
  std::mt19937 rng(3);
  std::normal_distribution<double> noise;
  for (auto& v : s)
    for (auto& c : v) c = {noise(rng), noise(rng)};
  return s;
}

void BM_duhamel_serial(benchmark::State& st) {
  std::vector<cplx> lambda;
  const auto s = duhamel_input(st.range(0), lambda);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::duhamel_serial(s, lambda, 1.0 / st.range(0)));
}
void BM_duhamel_parallel(benchmark::State& st) {
  std::vector<cplx> lambda;
  const auto s = duhamel_input(st.range(0), lambda);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::duhamel_parallel(s, lambda, 1.0 / st.range(0)));
}

kernels::OscillatoryProblem kernel_problem() {
  kernels::OscillatoryProblem p;
  p.dxi = M_PI / (32.0 * 16);
  for (double xi = -12.8; xi <= 12.8; xi += p.dxi) p.xi.push_back(xi);
  for (int j = 0; j < 256; ++j) p.x.push_back(-32.0 + j * 0.25);
  for (int q = 0; q < 16; ++q) p.tau.push_back(1.6 * std::pow(1.25, q));
  p.symbol = [](double xi, double tau) -> cplx {
    const double mu = tau - dyadic::omega(xi);
    return dyadic::chi_range(1, 3, xi) * dyadic::eta_leq(2, mu) * mu / cplx(mu, -0.1 * xi * xi);
  };
  const auto* xi = &p.xi;
  p.active = [xi](double) { return std::pair<std::size_t, std::size_t>(0, xi->size()); };
  return p;
}

void BM_kernel_sup_serial(benchmark::State& st) {
  const auto p = kernel_problem();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::kernel_sup_serial(p));
}
void BM_kernel_sup_parallel(benchmark::State& st) {
  const auto p = kernel_problem();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::kernel_sup_parallel(p));
}

void BM_convolve_serial(benchmark::State& st) {
  const auto a = random_field(16, 64, 4);
  const auto b = random_field(16, 64, 5);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::convolve_serial(a, b));
}
void BM_convolve_parallel(benchmark::State& st) {
  const auto a = random_field(16, 64, 4);
  const auto b = random_field(16, 64, 5);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::convolve_parallel(a, b));
}

}  // namespace

BENCHMARK(BM_l1x_l2t_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_l1x_l2t_parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_block_energy_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_block_energy_parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_duhamel_serial)->Arg(128)->Arg(512);
BENCHMARK(BM_duhamel_parallel)->Arg(128)->Arg(512);
BENCHMARK(BM_kernel_sup_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_sup_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
