#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bob/errors.hpp"
#include "bob/grid.hpp"
#include "bob/project.hpp"

using namespace bob;

TEST_CASE("grid construction rejects bad sizes") {
  CHECK_THROWS_AS(Grid::make(8.0, 100), ConfigError);
  CHECK_THROWS_AS(Grid::make(8.0, 8), ConfigError);
  CHECK_THROWS_AS(Grid::make(-1.0, 64), ConfigError);
  CHECK_NOTHROW(Grid::make(8.0, 16));
}

TEST_CASE("mode bookkeeping") {
  const Grid g = Grid::make(4.0, 16);
  CHECK(g.dx() == doctest::Approx(0.5));
  CHECK(g.dxi() == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(g.mode(3) == 3);
  CHECK(g.mode(13) == -3);
  CHECK(g.index_of_mode(-3) == 13);
  CHECK(g.is_nyquist(8));
  CHECK(g.wavenumber(2) == doctest::Approx(std::numbers::pi / 2.0));
  const auto s = g.sorted_wavenumbers();
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(s.front() == doctest::Approx(-8 * g.dxi()));
}

TEST_CASE("transform round trip and Parseval") {
  const Grid g = Grid::make(10.0, 128);
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  PhysicalField f = PhysicalField::zeros(g);
  for (auto& v : f.values) v = nd(rng);
  const SpectralField c = to_spectral(f);
  const PhysicalField back = to_physical(c);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(back.values[j] == doctest::Approx(f.values[j]).epsilon(1e-12));
  CHECK(l2_norm(c) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  // Plancherel with the continuum convention: ||f_hat||^2 = 2 pi ||f||^2.
  CHECK(l2_norm_frequency(c) == doctest::Approx(std::sqrt(2 * std::numbers::pi) * l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("derivative and Hilbert transform of trigonometric modes") {
  const Grid g = Grid::make(std::numbers::pi, 64);
  const auto f = PhysicalField::sample(g, [](double x) { return std::cos(3 * x); });
  const auto d = to_physical(derivative(to_spectral(f), 1));
  const auto h = to_physical(hilbert(to_spectral(f)));
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(d.values[j] == doctest::Approx(-3 * std::sin(3 * g.x(j))).epsilon(1e-12).scale(1));
    CHECK(h.values[j] == doctest::Approx(std::sin(3 * g.x(j))).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("continuum transform of a Gaussian") {
  // phi_hat(xi) = sqrt(pi) w exp(-xi^2 w^2 / 4) up to the origin phase.
  const Grid g = Grid::make(16.0, 256);
  const double w = 1.5;
  const auto f = PhysicalField::sample(g, [w](double x) { return std::exp(-x * x / (w * w)); });
  const SpectralField c = to_spectral(f);
  for (long m : {0L, 3L, 10L}) {
    const double xi = g.dxi() * static_cast<double>(m);
    CHECK(std::abs(g.dx() * c.at_mode(m)) ==
          doctest::Approx(std::sqrt(std::numbers::pi) * w * std::exp(-xi * xi * w * w / 4)).epsilon(1e-10));
  }
}

TEST_CASE("restriction keeps shared modes") {
  const Grid fine = Grid::make(8.0, 128);
  const Grid coarse = Grid::make(8.0, 64);
  const auto f = PhysicalField::sample(fine, [](double x) { return std::exp(-x * x); });
  const auto r = to_physical(restrict_to(to_spectral(f), coarse));
  for (std::size_t j = 0; j < coarse.size(); ++j)
    CHECK(r.values[j] == doctest::Approx(std::exp(-coarse.x(j) * coarse.x(j))).epsilon(1e-10).scale(1));
  CHECK_THROWS_AS(restrict_to(to_spectral(f), Grid::make(4.0, 64)), ConfigError);
}

TEST_CASE("projection onto frequency blocks") {
  const Grid g = Grid::make(16.0, 256);
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  PhysicalField f = PhysicalField::zeros(g);
  for (auto& v : f.values) v = nd(rng);
  const SpectralField c = to_spectral(f);
  SpectralField sum = SpectralField::zeros(g);
  for (int k = 0; k <= 6; ++k) sum = sum + project(c, dyadic::DyadicSymbol::make_eta(k));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(sum.coeffs[i] - c.coeffs[i]) < 1e-10);
  CHECK_THROWS_AS(project(c, dyadic::DyadicSymbol::make_eta(1), Axis::modulation), ConfigError);
}
