#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bob/dyadic.hpp"
#include "bob/errors.hpp"
#include "bob/norms.hpp"
#include "oracles.hpp"

using namespace bob;
namespace dy = bob::dyadic;

namespace {

PhysicalField random_smooth(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> w(0.5, 3.0);
  const double a = nd(rng), b = nd(rng), width = w(rng), kappa = 4.0 * w(rng);
  return PhysicalField::sample(g, [=](double x) {
    return std::exp(-x * x / (width * width)) * (a + b * std::cos(kappa * x));
  });
}

// Field on a (k, j) plateau: eta_k(xi) = 1 and the modulation block equals 1.
SpaceTimeSpectral plateau_block(const Grid& g, const TimeAxis& t, int k, int j, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  SpaceTimeSpectral f = SpaceTimeSpectral::zeros(g, t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.wavenumber(i);
    if (dy::eta(k, xi) != 1.0) continue;
    for (std::size_t n = 0; n < t.n_time; ++n) {
      const double nu = k >= 1 ? t.tau(n) - dy::omega(xi) : t.tau(n);
      if (dy::eta(j, nu) == 1.0) f.at(i, n) = {nd(rng), nd(rng)};
    }
  }
  return f;
}

}  // namespace

TEST_CASE("beta weights") {
  for (int k = 0; k < 10; ++k) CHECK(beta_weight(k, 2 * k) == 2.0);
  CHECK(beta_weight(40, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(beta_weight(3, 1) >= 1.0);
}

TEST_CASE("Sobolev norm of a Gaussian against the closed form") {
  const Grid g = Grid::make(20.0, 512);
  const double w = 1.3;
  const auto phi = PhysicalField::sample(g, [w](double x) { return std::exp(-x * x / (w * w)); });
  const SpectralField c = to_spectral(phi);
  const double pi = std::numbers::pi;
  // int (1 + xi^2)^s pi w^2 exp(-xi^2 w^2 / 2) dxi
  const double h0 = std::sqrt(pi * w * w * std::sqrt(2 * pi) / w);
  const double h1 = std::sqrt(pi * w * w * (std::sqrt(2 * pi) / w + std::sqrt(2 * pi) / (w * w * w)));
  CHECK(sobolev_norm(c, 0.0) == doctest::Approx(h0).epsilon(1e-8));
  CHECK(sobolev_norm(c, 1.0) == doctest::Approx(h1).epsilon(1e-8));
  CHECK(sobolev_norm(SpectralField::zeros(g), 2.0) == 0.0);
}

TEST_CASE("B0 of zero and of a positive bump") {
  const Grid g = Grid::make(8.0, 64);
  CHECK(b0_norm(SpectralField::zeros(g)).total == 0.0);
  SpectralField f = SpectralField::zeros(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.coeffs[i] = dy::eta0(g.wavenumber(i));
  double l1 = 0.0;
  for (cplx z : to_physical_complex(f)) l1 += std::abs(z) * g.dx();
  const auto b = b0_norm(f);
  CHECK(b.total <= l1 * (1 + 1e-12));
  CHECK(b.total > 0.0);
  CHECK(b0_split_cost(f, f) == doctest::Approx(l1).epsilon(1e-12));
}

TEST_CASE("B0 rejects data outside the low band") {
  const Grid g = Grid::make(8.0, 64);
  SpectralField f = SpectralField::zeros(g);
  f.at_mode(10) = 1.0;  // xi ~ 3.9
  CHECK_THROWS_AS(b0_norm(f), DomainError);
}

TEST_CASE("B0 against the split search and a quasi-Newton oracle") {
  const Grid g = Grid::make(8.0, 32);
  std::mt19937_64 rng(11);
  for (int s = 0; s < 6; ++s) {
    std::vector<long> modes;
    const SpectralField f = oracle::random_low_modes(g, rng, 8, &modes);
    const double reported = b0_norm(f).total;
    const double search = oracle::b0_split_search(f, modes);
    const double qn = oracle::b0_quasi_newton(f);
    CAPTURE(s);
    CHECK(reported <= 1.01 * search);
    CHECK(std::abs(reported - qn) <= 0.01 * qn);
  }
}

TEST_CASE("B0 witness cost equals the reported value") {
  const Grid g = Grid::make(6.0, 16);
  std::mt19937_64 rng(4);
  const SpectralField f = oracle::random_low_modes(g, rng, 7);
  const auto b = b0_norm(f);
  REQUIRE(b.split_g.has_value());
  CHECK(b0_split_cost(f, *b.split_g) == doctest::Approx(b.total).epsilon(1e-12));
}

TEST_CASE("refined norm: pure high mode sits in one block") {
  const Grid g = Grid::make(16.0, 256);
  // xi = 8 is the mode m = 8 L / pi only when L is a multiple of pi; use the nearest mode.
  SpectralField f = SpectralField::zeros(g);
  const long m = std::lround(8.0 / g.dxi());
  f.at_mode(m) = 1.0;
  f.at_mode(-m) = 1.0;
  REQUIRE(dy::eta(3, g.dxi() * m) == 1.0);
  const auto b = refined_sobolev_norm(f, 0.0);
  for (const auto& blk : b.blocks)
    if (blk.block_id != "k=3") CHECK(blk.contribution == 0.0);
  CHECK(b.total == doctest::Approx(sobolev_norm(f, 0.0)).epsilon(1e-12));
  for (double sigma : {0.5, 1.0, 2.0})
    CHECK(refined_sobolev_norm(f, sigma).total == doctest::Approx(std::exp2(3 * sigma) * b.total).epsilon(1e-12));
}

TEST_CASE("refined norm: homogeneity, triangle inequality, embedding") {
  const Grid g = Grid::make(16.0, 128);
  std::mt19937_64 rng(21);
  for (int s = 0; s < 4; ++s) {
    const SpectralField f = to_spectral(random_smooth(g, rng));
    const SpectralField h = to_spectral(random_smooth(g, rng));
    const auto bf = refined_sobolev_norm(f, 0.0);
    const auto bh = refined_sobolev_norm(h, 0.0);
    CHECK(refined_sobolev_norm(cplx(-2.5, 0.0) * f, 0.0).total == doctest::Approx(2.5 * bf.total).epsilon(1e-10));
    B0Options shared;
    shared.initial_g.push_back(*bf.split_g + *bh.split_g);
    CHECK(refined_sobolev_norm(f + h, 0.0, shared).total <= bf.total + bh.total + 1e-10);
    for (double sigma : {0.0, 0.5, 1.0, 2.0}) {
      const double c = 2.0 * std::sqrt(2.0) * std::pow(3.56, 0.5 * sigma);
      CHECK(sobolev_norm(f, sigma) <= c * refined_sobolev_norm(f, sigma).total);
    }
  }
}

TEST_CASE("X_k of a single plateau block") {
  const Grid g = Grid::make(16.0, 128);
  const TimeAxis t = TimeAxis::make(-4.0, 8.0, 512);
  for (auto [k, j] : {std::pair{3, 4}, std::pair{2, 1}, std::pair{1, 3}}) {
    const auto f = plateau_block(g, t, k, j, 7 + k);
    const double mass = l2_norm(f);
    REQUIRE(mass > 0.0);
    const double expect = std::exp2(0.5 * j) * beta_weight(k, j) * mass;
    CHECK(xk_norm(f, k).total == doctest::Approx(expect).epsilon(1e-12));
    CHECK(xk_norm(cplx(0, 3) * f, k).total == doctest::Approx(3 * expect).epsilon(1e-12));
  }
}

TEST_CASE("X_0 and Zbar_0 on plateau blocks") {
  const Grid g = Grid::make(16.0, 128);
  const TimeAxis t = TimeAxis::make(-8.0, 16.0, 512);
  // xi plateau of chi_0 (|xi| in [0.8, 1.25]) and tau plateau of eta_2.
  SpaceTimeSpectral f = SpaceTimeSpectral::zeros(g, t);
  std::mt19937 rng(2);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (dy::chi(0, g.wavenumber(i)) != 1.0) continue;
    for (std::size_t n = 0; n < t.n_time; ++n)
      if (dy::eta(2, t.tau(n)) == 1.0) f.at(i, n) = {nd(rng), nd(rng)};
  }
  const double mass = l2_norm(f);
  REQUIRE(mass > 0.0);
  CHECK(xk_norm(f, 0).total == doctest::Approx(4.0 * mass).epsilon(1e-12));
  CHECK(zbar0_norm(f) == doctest::Approx(4.0 * mass).epsilon(1e-12));

  const auto f5 = plateau_block(g, t, 0, 5, 3);
  // restrict to |xi| <= 2
  SpaceTimeSpectral low = f5;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.wavenumber(i)) > 1.25)
      for (std::size_t n = 0; n < t.n_time; ++n) low.at(i, n) = 0.0;
  CHECK(zbar0_norm(low) == doctest::Approx(32.0 * l2_norm(low)).epsilon(1e-12));
}

TEST_CASE("Y_0 of a separable field") {
  const Grid g = Grid::make(8.0, 64);
  const TimeAxis t = TimeAxis::make(-16.0, 32.0, 512);
  std::mt19937 rng(8);
  std::normal_distribution<double> nd;
  std::vector<cplx> a(g.size()), b(t.n_time);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.wavenumber(i)) <= 1.5) a[i] = {nd(rng), nd(rng)};

  auto direct = [&](std::vector<cplx> bb) {
    // sum_x dx |IDFT a| * sqrt(sum_t dt |IDFT b|^2), both inverse DFTs by direct sums
    const std::size_t N = g.size(), M = t.n_time;
    double l1 = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < N; ++i)
        s += a[i] * std::polar(1.0, 2 * std::numbers::pi * double(i * j % N) / double(N));
      l1 += g.dx() * std::abs(s) / double(N);
    }
    double l2 = 0.0;
    for (std::size_t n = 0; n < M; ++n) {
      cplx s = 0.0;
      for (std::size_t q = 0; q < M; ++q)
        s += bb[q] * std::polar(1.0, 2 * std::numbers::pi * double(q * n % M) / double(M));
      l2 += t.dt() * std::norm(s / double(M));
    }
    return l1 * std::sqrt(l2);
  };
  auto build = [&](const std::vector<cplx>& bb) {
    SpaceTimeSpectral f = SpaceTimeSpectral::zeros(g, t);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t n = 0; n < t.n_time; ++n) f.at(i, n) = a[i] * bb[n];
    return f;
  };

  SUBCASE("high block carries 2^j") {
    for (std::size_t n = 0; n < t.n_time; ++n)
      if (dy::eta(3, t.tau(n)) == 1.0) b[n] = {nd(rng), nd(rng)};
    CHECK(y0_norm(build(b)) == doctest::Approx(8.0 * direct(b)).epsilon(1e-10));
  }
  SUBCASE("low homogeneous block carries weight 1") {
    for (std::size_t n = 0; n < t.n_time; ++n)
      if (dy::chi(-2, t.tau(n)) == 1.0) b[n] = {nd(rng), nd(rng)};
    REQUIRE(t.homogeneous_floor() < -2);
    CHECK(y0_norm(build(b)) == doctest::Approx(direct(b)).epsilon(1e-10));
  }
}

TEST_CASE("Z_k candidates") {
  const Grid g = Grid::make(16.0, 128);
  const TimeAxis t = TimeAxis::make(-4.0, 8.0, 512);
  ZOptions with_y;
  with_y.k_y = 0;
  const auto high = plateau_block(g, t, 3, 6, 5);
  const auto zb = zk_norm(high, 3, with_y);
  CHECK(zb.total == doctest::Approx(xk_norm(high, 3).total).epsilon(1e-12));
  CHECK(zb.threshold == 0);

  std::mt19937 rng(9);
  std::normal_distribution<double> nd;
  SpaceTimeSpectral f = SpaceTimeSpectral::zeros(g, t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.wavenumber(i);
    const double w = dy::eta(3, xi);
    if (w == 0.0) continue;
    for (std::size_t n = 0; n < t.n_time; ++n)
      if (std::abs(t.tau(n) - dy::omega(xi)) < 6.0) f.at(i, n) = w * cplx(nd(rng), nd(rng));
  }
  const auto z = zk_norm(f, 3, with_y);
  CHECK(z.total <= xk_norm(f, 3).total * (1 + 1e-12));
  CHECK(zk_norm(SpaceTimeSpectral::zeros(g, t), 3, with_y).total == 0.0);
  CHECK(zk_norm(cplx(2, 0) * f, 3, with_y).total == doctest::Approx(2 * z.total).epsilon(1e-10));

  // Triangle inequality with shared candidates.
  const auto zh = zk_norm(high, 3, with_y);
  ZOptions shared = with_y;
  auto sum_y = SpaceTimeSpectral::zeros(g, t);
  if (z.split_y) sum_y = sum_y + *z.split_y;
  if (zh.split_y) sum_y = sum_y + *zh.split_y;
  shared.extra_y.push_back(sum_y);
  CHECK(zk_norm(f + high, 3, shared).total <= z.total + zh.total + 1e-10);

  // Outside the band is rejected.
  CHECK_THROWS_AS(xk_norm(high, 5), DomainError);
}

TEST_CASE("F^sigma of a windowed single mode lives in one block") {
  const Grid g = Grid::make(4.0 * std::numbers::pi, 128);
  const TimeAxis t = TimeAxis::make(-4.0, 8.0, 256);
  const int k = 2;
  SpaceTimeField u = SpaceTimeField::zeros(g, t);
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t n = 0; n < t.n_time; ++n)
      u.at(j, n) = dy::eta0(t.t(n)) * std::cos(4.0 * g.x(j));
  const auto b = fsigma_norm(u, 1.0);
  REQUIRE(b.total > 0.0);
  for (std::size_t q = 0; q < b.blocks.size(); ++q)
    if (static_cast<int>(q) != k) CHECK(b.blocks[q].contribution < 1e-9 * b.total);
  CHECK(fsigma_norm(SpaceTimeField::zeros(g, t), 0.0).total == 0.0);
  CHECK(b.total == doctest::Approx(4.0 * fsigma_norm(u, 0.0).total).epsilon(1e-12));
}

TEST_CASE("N^sigma divides by the modulation") {
  const Grid g = Grid::make(16.0, 128);
  const TimeAxis t = TimeAxis::make(-4.0, 8.0, 512);
  const int k = 3, j = 5;
  const auto f = plateau_block(g, t, k, j, 12);
  const double x = std::exp2(0.5 * j) * beta_weight(k, j) * l2_norm(f);
  const double n = nsigma_norm_spectral(f, 0.0).total;
  CHECK(n >= x / (1.26 * std::exp2(j)));
  CHECK(n <= x / (0.79 * std::exp2(j)));
}

TEST_CASE("NormBreakdown CSV") {
  NormBreakdown b;
  b.total = 2.5;
  b.blocks.push_back({"k=1", 2.0, 1.5});
  std::ostringstream os;
  write_csv(os, b);
  CHECK(os.str() == "# schema=v1\nblock_id,weight,contribution\nk=1,2,1.5\ntotal,1,2.5\n");
}
