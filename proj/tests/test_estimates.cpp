#include <doctest.h>

#include <gsl/gsl_integration.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bob/dyadic.hpp"
#include "bob/errors.hpp"
#include "bob/estimates.hpp"
#include "bob/kernels.hpp"
#include "bob/norms.hpp"

using namespace bob;
namespace dy = bob::dyadic;

namespace {

StudyConfig small_study() {
  StudyConfig cfg;
  cfg.lab = {8.0, 64, 4.0, 256};
  cfg.epsilons = {1.0, 1e-2};
  cfg.sigmas = {0.0, 1.0};
  cfg.samples = 3;
  return cfg;
}

struct QuadParams {
  double tau, eps;
  bool imag;
};

double symbol_part(double xi, void* p) {
  const auto* q = static_cast<QuadParams*>(p);
  const cplx m = cplx(0.0, -q->eps * q->tau) / cplx(q->tau + xi * xi, -q->eps * xi * xi);
  return q->imag ? m.imag() : m.real();
}

// |(1/pi) int_0^inf cos(x xi) m(xi) d xi| by GSL's oscillatory Fourier quadrature.
double kernel_by_quadrature(double x, double tau, double eps) {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
  gsl_integration_workspace* cw = gsl_integration_workspace_alloc(2000);
  gsl_integration_qawo_table* t = gsl_integration_qawo_table_alloc(x, 1.0, GSL_INTEG_COSINE, 50);
  double parts[2];
  for (int im = 0; im < 2; ++im) {
    QuadParams p{tau, eps, im == 1};
    gsl_function f{&symbol_part, &p};
    double err = 0.0;
    gsl_integration_qawf(&f, 0.0, 1e-10, 2000, w, cw, t, &parts[im], &err);
  }
  gsl_integration_qawo_table_free(t);
  gsl_integration_workspace_free(cw);
  gsl_integration_workspace_free(w);
  return std::hypot(parts[0], parts[1]) / std::numbers::pi;
}

}  // namespace

TEST_CASE("free estimate ratios are invariant under scaling the data") {
  const auto cfg = small_study();
  const DataFamily base = gaussian_family();
  const DataFamily scaled = [&](const Grid& g, std::uint64_t seed) {
    auto p = base(g, seed);
    for (auto& v : p.values) v *= 37.5;
    return p;
  };
  const auto a = free_estimate_study(cfg, base);
  const auto b = free_estimate_study(cfg, scaled);
  REQUIRE(a.samples.size() == b.samples.size());
  REQUIRE(a.samples.size() == 3 * 2 * 2);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(b.samples[i].ratio == doctest::Approx(a.samples[i].ratio).epsilon(1e-9));
}

TEST_CASE("studies replay exactly from the seed") {
  const auto cfg = small_study();
  std::ostringstream a, b, ja, jb;
  const auto s1 = free_estimate_study(cfg, gaussian_family());
  const auto s2 = free_estimate_study(cfg, gaussian_family());
  s1.write_csv(a);
  s2.write_csv(b);
  s1.write_json(ja);
  s2.write_json(jb);
  CHECK(a.str() == b.str());
  CHECK(ja.str() == jb.str());
  CHECK(a.str().rfind("# schema=v1\nestimate_id,seed,epsilon,sigma,ratio,param\n", 0) == 0);
  auto other = cfg;
  other.seed = 2;
  std::ostringstream c;
  free_estimate_study(other, gaussian_family()).write_csv(c);
  CHECK(c.str() != a.str());
}

TEST_CASE("zero data is skipped with a notice") {
  auto cfg = small_study();
  const DataFamily zero = [](const Grid& g, std::uint64_t) { return PhysicalField::zeros(g); };
  const auto s = free_estimate_study(cfg, zero);
  CHECK(s.samples.empty());
  CHECK(s.notices.size() == 6);
  const auto i = inhomogeneous_estimate_study(cfg, zero);
  CHECK(i.samples.empty());
  CHECK(!i.notices.empty());
}

TEST_CASE("summary statistics") {
  RatioStudy s;
  s.estimate_id = "t";
  s.epsilons = {1.0, 0.1};
  s.samples = {{"t", 1, 1.0, 0.0, 2.0, 0}, {"t", 2, 1.0, 0.0, 1.0, 1},
               {"t", 1, 0.1, 0.0, 4.0, 2}, {"t", 2, 0.1, 0.0, 3.0, 3}};
  const auto sum = s.summarize();
  REQUIRE(sum.size() == 1);
  CHECK(sum[0].max == 4.0);
  CHECK(sum[0].median == 2.5);
  CHECK(sum[0].spread == doctest::Approx(2.0));
  CHECK(sum[0].slope == doctest::Approx(-std::log10(2.0)));
  CHECK(s.rank_correlation() == doctest::Approx(0.6));
}

TEST_CASE("dissipative kernel closed form matches quadrature") {
  for (double eps : {1.0, 0.5, 0.2})
    for (double tau : {2.0, 9.0, -4.0})
      for (double x : {0.3, 1.0, 2.5}) {
        const double q = kernel_by_quadrature(x, tau, eps);
        CHECK(dissipative_kernel(x, tau, eps) == doctest::Approx(q).epsilon(1e-6));
      }
  CHECK(dissipative_kernel(1.0, 3.0, 0.0) == 0.0);
}

TEST_CASE("multiplier kernel value is stable under a finer x grid") {
  KernelConfig cfg;
  const double v = multiplier_kernel_value(1, 0.1, cfg);
  cfg.n_points *= 2;
  const double w = multiplier_kernel_value(1, 0.1, cfg);
  CHECK(v > 0.0);
  CHECK(w == doctest::Approx(v).epsilon(0.02));
  KernelConfig coarse;
  coarse.half_length = 4096.0;
  coarse.n_points = 4096;
  coarse.refine = 1;
  CHECK_THROWS_AS(multiplier_kernel_value(1, 0.1, coarse), ResolutionError);
}

TEST_CASE("bilinear sides match a direct convolution") {
  const LabGrid lab{8.0, 64, 8.0, 64};
  const Grid g = lab.grid();
  const TimeAxis t = lab.time();
  const BilinearRegime r{1, 1, 1, 3};
  const auto f1 = dyadic_block_sample(g, t, 1, 1, 11);
  const auto f2 = dyadic_block_sample(g, t, 1, 2, 12);
  const auto s = bilinear_sides(f1, f2, r, 5);
  ZOptions zo;
  zo.k_y = 5;
  auto c = kernels::convolve_serial(f1, f2);
  for (std::size_t i = 0; i < c.n_space(); ++i) {
    const double xi = c.grid.wavenumber(i);
    for (std::size_t n = 0; n < c.n_time(); ++n)
      c.at(i, n) *= dy::eta(1, xi) / cplx(c.time.tau(n) - dy::omega(xi), 1.0);
  }
  CHECK(s.lhs == doctest::Approx(2.0 * zk_norm(c, 1, zo).total).epsilon(1e-9));
  CHECK(s.rhs == doctest::Approx(zk_norm(f1, 1, zo).total * zk_norm(f2, 1, zo).total).epsilon(1e-12));
  const auto d = bilinear_sides(cplx(3.0) * f1, f2, r, 5);
  CHECK(d.lhs == doctest::Approx(3.0 * s.lhs).epsilon(1e-9));
  CHECK(d.lhs / d.rhs == doctest::Approx(s.lhs / s.rhs).epsilon(1e-9));
}

TEST_CASE("bilinear regimes outside the lab grid are rejected") {
  BilinearConfig cfg;
  cfg.samples = 2;
  CHECK_THROWS_AS(bilinear_dyadic_study({9, 9, 9, 6}, cfg), ConfigError);
  CHECK_THROWS_AS(bilinear_dyadic_study({2, 2, 2, 40}, cfg), ConfigError);
}
