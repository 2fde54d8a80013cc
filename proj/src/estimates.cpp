#include "bob/estimates.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "bob/dyadic.hpp"
#include "bob/errors.hpp"
#include "bob/evolution.hpp"
#include "bob/fit.hpp"
#include "bob/kernels.hpp"
#include "bob/norms.hpp"

namespace bob {

namespace dy = dyadic;

// ---- bookkeeping ------------------------------------------------------------

std::vector<RatioSummary> RatioStudy::summarize() const {
  std::map<double, std::vector<const RatioSample*>> by_sigma;
  for (const auto& s : samples) by_sigma[s.sigma].push_back(&s);
  std::vector<RatioSummary> out;
  for (const auto& [sigma, list] : by_sigma) {
    RatioSummary r;
    r.sigma = sigma;
    std::vector<double> all;
    std::map<double, double> per_eps;
    for (const auto* s : list) {
      all.push_back(s->ratio);
      r.max = std::max(r.max, s->ratio);
      auto [it, fresh] = per_eps.emplace(s->epsilon, s->ratio);
      if (!fresh) it->second = std::max(it->second, s->ratio);
    }
    r.median = median(all);
    std::vector<double> eps, mx;
    double lo = INFINITY, hi = 0.0;
    for (const auto& [e, m] : per_eps) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
      if (e > 0.0 && m > 0.0) {
        eps.push_back(e);
        mx.push_back(m);
      }
    }
    r.spread = lo > 0.0 ? hi / lo : INFINITY;
    if (eps.size() >= 2) r.slope = fit_loglog(eps, mx).slope;
    out.push_back(r);
  }
  return out;
}

void RatioStudy::write_csv(std::ostream& os) const {
  char buf[160];
  os << "# schema=v1\n" << "estimate_id,seed,epsilon,sigma,ratio,param\n";
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, ",%llu,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<unsigned long long>(s.seed), s.epsilon, s.sigma, s.ratio, s.param);
    os << s.estimate_id << buf;
  }
}

void RatioStudy::write_json(std::ostream& os) const {
  nlohmann::json j;
  j["schema"] = "v1";
  j["estimate_id"] = estimate_id;
  j["epsilons"] = epsilons;
  j["label"] = "empirical ratio tracking";
  nlohmann::json sums = nlohmann::json::array();
  for (const auto& r : summarize())
    sums.push_back({{"sigma", r.sigma}, {"max", r.max}, {"median", r.median},
                    {"spread", r.spread}, {"slope", r.slope}});
  j["summary"] = sums;
  j["notices"] = notices;
  os << j.dump(2) << '\n';
}

double RatioStudy::rank_correlation() const {
  std::vector<double> p, r;
  for (const auto& s : samples) {
    p.push_back(s.param);
    r.push_back(s.ratio);
  }
  return spearman(p, r);
}

Grid LabGrid::grid() const { return Grid::make(half_length, n_points); }

TimeAxis LabGrid::time() const { return TimeAxis::make(-0.5 * window, window, n_time); }

namespace {

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t v[2];
  seq.generate(v, v + 2);
  return (static_cast<std::uint64_t>(v[0]) << 32) | v[1];
}

// Runs fn(i) for i in [0, count) on a worker team; the first exception is rethrown.
template <class Fn>
void run_cells(std::size_t count, int workers, Fn&& fn) {
  std::exception_ptr error;
  const int team = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(bob_cells)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<double> sorted_descending(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// F^sigma from the F^0 block list (block k carries Z_k).
double reweight(const NormBreakdown& zero, double sigma) {
  double s = 0.0;
  for (std::size_t k = 0; k < zero.blocks.size(); ++k) {
    const double c = std::exp2(sigma * static_cast<double>(k)) * zero.blocks[k].contribution;
    s += c * c;
  }
  return std::sqrt(s);
}

double bump(double t) {
  return dy::smooth_step(t / 0.3) * dy::smooth_step((1.5 - t) / 0.3);
}

}  // namespace

DataFamily random_smooth_family(double max_frequency) {
  return [max_frequency](const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> width(1.5, 3.0);
    std::uniform_real_distribution<double> freq(0.0, max_frequency);
    std::normal_distribution<double> coef;
    const double w = width(rng);
    double kappa[4], a[4], b[4];
    for (int q = 0; q < 4; ++q) {
      kappa[q] = freq(rng);
      a[q] = coef(rng);
      b[q] = coef(rng);
    }
    return PhysicalField::sample(g, [&](double x) {
      double s = 0.0;
      for (int q = 0; q < 4; ++q) s += a[q] * std::cos(kappa[q] * x) + b[q] * std::sin(kappa[q] * x);
      return std::exp(-x * x / (w * w)) * s;
    });
  };
}

DataFamily gaussian_family(double w_min, double w_max, double shift) {
  if (!(w_min > 0.0 && w_max >= w_min && shift >= 0.0))
    throw ConfigError("gaussian family needs 0 < w_min <= w_max and shift >= 0");
  return [=](const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double w = std::uniform_real_distribution<double>(w_min, w_max)(rng);
    const double c = std::uniform_real_distribution<double>(-shift, shift)(rng);
    return PhysicalField::sample(g, [&](double x) { return std::exp(-(x - c) * (x - c) / (w * w)); });
  };
}

// ---- linear estimates ---------------------------------------------------------

SpaceTimeField windowed_free_solution(const PhysicalField& phi, double epsilon,
                                      const TimeAxis& time) {
  const SpectralField phi_hat = to_spectral(phi);
  return spacetime_from_slices(phi.grid, time, [&](double t) {
    SpectralField s = apply_semigroup_even(phi_hat, t, epsilon);
    const double psi = dy::eta0(t);
    for (auto& c : s.coeffs) c *= psi;
    return s;
  });
}

RatioStudy free_estimate_study(const StudyConfig& cfg, const DataFamily& family) {
  const Grid g = cfg.lab.grid();
  const TimeAxis time = cfg.lab.time();
  RatioStudy study;
  study.estimate_id = "free_solution";
  study.epsilons = sorted_descending(cfg.epsilons);
  const std::size_t ns = static_cast<std::size_t>(cfg.samples);
  const std::size_t ne = study.epsilons.size();

  std::vector<PhysicalField> data;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> rhs(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    seeds.push_back(sample_seed(cfg.seed, s));
    data.push_back(family(g, seeds.back()));
  }
  run_cells(ns, cfg.workers, [&](std::size_t s) {
    const SpectralField ph = to_spectral(data[s]);
    for (double sigma : cfg.sigmas) rhs[s].push_back(refined_sobolev_norm(ph, sigma).total);
  });
  std::vector<NormBreakdown> lhs(ns * ne);
  ZOptions zo;
  zo.k_y = cfg.k_y;
  run_cells(ns * ne, cfg.workers, [&](std::size_t cell) {
    const std::size_t s = cell / ne;
    if (rhs[s].empty() || rhs[s][0] == 0.0) return;
    const auto u = windowed_free_solution(data[s], study.epsilons[cell % ne], time);
    lhs[cell] = fsigma_norm(u, 0.0, zo);
  });
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t q = 0; q < cfg.sigmas.size(); ++q) {
      if (!(rhs[s][q] > 0.0)) {
        study.notices.push_back("sample " + std::to_string(s) + " has zero norm; skipped");
        continue;
      }
      for (std::size_t e = 0; e < ne; ++e)
        study.samples.push_back({study.estimate_id, seeds[s], study.epsilons[e], cfg.sigmas[q],
                                 reweight(lhs[s * ne + e], cfg.sigmas[q]) / rhs[s][q], 0.0});
    }
  }
  return study;
}

SpaceTimeField forcing_sample(const PhysicalField& phi, double shift, const TimeAxis& time) {
  const SpectralField phi_hat = to_spectral(phi);
  return spacetime_from_slices(phi.grid, time, [&](double t) {
    if (t <= 0.0 || t >= 1.5) return SpectralField::zeros(phi.grid);
    SpectralField s = apply_semigroup(phi_hat, t, 0.0);
    const double b = bump(t);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
      const long m = phi.grid.mode(i);
      const double sgn = m > 0 ? 1.0 : (m < 0 ? -1.0 : 0.0);
      s.coeffs[i] *= b * std::polar(1.0, t * shift * sgn);
    }
    return s;
  });
}

SpaceTimeField windowed_duhamel(const SpaceTimeField& u, double epsilon) {
  const TimeAxis& time = u.time;
  const Grid& g = u.grid;
  const double start = -time.t_start / time.dt();
  const auto n0 = static_cast<std::size_t>(std::llround(start));
  if (time.t_start > 0.0 || std::abs(start - static_cast<double>(n0)) > 1e-9)
    throw ConfigError("time window must contain t = 0 as a node");
  const std::size_t m = time.n_time;
  kernels::Slices slices;
  for (std::size_t n = n0; n < m; ++n) {
    PhysicalField p = PhysicalField::zeros(g);
    for (std::size_t j = 0; j < g.size(); ++j) p.values[j] = u.at(j, n);
    slices.push_back(to_spectral(p).coeffs);
  }
  std::vector<cplx> lambda(g.size());
  const DispersionParams disp{epsilon};
  for (std::size_t i = 0; i < g.size(); ++i) lambda[i] = disp.lambda(g.wavenumber(i));
  const auto d = kernels::duhamel_parallel(slices, lambda, time.dt());
  SpaceTimeField out = SpaceTimeField::zeros(g, time);
  for (std::size_t n = n0; n < m; ++n) {
    const double psi = dy::eta0(time.t(n));
    if (psi == 0.0) continue;
    const PhysicalField p = to_physical(SpectralField{g, d[n - n0]});
    for (std::size_t j = 0; j < g.size(); ++j) out.at(j, n) = psi * p.values[j];
  }
  return out;
}

RatioStudy inhomogeneous_estimate_study(const StudyConfig& cfg, const DataFamily& family) {
  const Grid g = cfg.lab.grid();
  const TimeAxis time = cfg.lab.time();
  RatioStudy study;
  study.estimate_id = "inhomogeneous";
  study.epsilons = sorted_descending(cfg.epsilons);
  const std::size_t ns = static_cast<std::size_t>(cfg.samples);
  const std::size_t ne = study.epsilons.size();
  ZOptions zo;
  zo.k_y = cfg.k_y;

  std::vector<SpaceTimeField> forcing;
  std::vector<std::uint64_t> seeds;
  std::vector<double> shifts;
  for (std::size_t s = 0; s < ns; ++s) {
    seeds.push_back(sample_seed(cfg.seed, s));
    std::mt19937_64 rng(seeds.back() ^ 0x5bd1e995ULL);
    std::uniform_int_distribution<int> level(0, 6);
    std::bernoulli_distribution sign;
    const double shift = (sign(rng) ? 1.0 : -1.0) * std::exp2(level(rng));
    shifts.push_back(shift);
    forcing.push_back(forcing_sample(family(g, seeds.back()), shift, time));
  }
  std::vector<NormBreakdown> rhs(ns);
  run_cells(ns, cfg.workers, [&](std::size_t s) { rhs[s] = nsigma_norm(forcing[s], 0.0, zo); });
  std::vector<NormBreakdown> lhs(ns * ne);
  run_cells(ns * ne, cfg.workers, [&](std::size_t cell) {
    const std::size_t s = cell / ne;
    if (rhs[s].total == 0.0) return;
    lhs[cell] = fsigma_norm(windowed_duhamel(forcing[s], study.epsilons[cell % ne]), 0.0, zo);
  });
  for (std::size_t s = 0; s < ns; ++s) {
    if (rhs[s].total == 0.0) {
      study.notices.push_back("sample " + std::to_string(s) + " has zero forcing; skipped");
      continue;
    }
    for (double sigma : cfg.sigmas) {
      const double r = reweight(rhs[s], sigma);
      for (std::size_t e = 0; e < ne; ++e)
        study.samples.push_back({study.estimate_id, seeds[s], study.epsilons[e], sigma,
                                 reweight(lhs[s * ne + e], sigma) / r, shifts[s]});
    }
  }
  return study;
}

// ---- multiplier kernel ------------------------------------------------------------

namespace {

double inverse_omega(double y) { return y >= 0.0 ? -std::sqrt(y) : std::sqrt(-y); }

cplx damping_factor(double mu, double xi, double epsilon) {
  if (epsilon == 0.0) return 1.0;
  return mu / cplx(mu, -epsilon * xi * xi);
}

double kernel_value_at(int k, double epsilon, const KernelConfig& cfg, int refine) {
  const double L = cfg.half_length;
  const double dxi = std::numbers::pi / (L * refine);
  if (L * dxi > 0.25 * std::numbers::pi)
    throw ResolutionError("xi step does not resolve the kernel phase on the x range");

  const double reach = k >= 1 ? 1.6 * std::ldexp(1.0, k + 1) : 3.2;
  const auto half = static_cast<long>(std::ceil(reach / dxi));
  kernels::OscillatoryProblem p;
  p.dxi = dxi;
  for (long r = -half; r <= half; ++r) p.xi.push_back(static_cast<double>(r) * dxi);
  const double dx = 2.0 * L / static_cast<double>(cfg.n_points);
  for (std::size_t j = 0; j < cfg.n_points; ++j) p.x.push_back(-L + static_cast<double>(j) * dx);

  double lo, hi;
  if (k >= 1) {
    lo = 0.1 * std::ldexp(1.0, 2 * k);
    hi = 10.24 * std::ldexp(1.0, 2 * k);
  } else {
    lo = 0.625 * std::ldexp(1.0, cfg.low_j);
    hi = 1.6 * std::ldexp(1.0, cfg.low_j);
  }
  for (int sgn : {-1, 1})
    for (int q = 0; q < cfg.tau_samples; ++q) {
      const double f = cfg.tau_samples > 1 ? double(q) / (cfg.tau_samples - 1) : 0.0;
      p.tau.push_back(sgn * lo * std::pow(hi / lo, f));
    }

  if (k >= 1) {
    const double band = 1.6 * std::ldexp(1.0, k);
    p.symbol = [k, epsilon](double xi, double tau) -> cplx {
      const double w = dy::chi_range(k - 1, k + 1, xi);
      if (w == 0.0) return 0.0;
      const double mu = tau - dy::omega(xi);
      const double m = dy::eta_leq(k, mu);
      if (m == 0.0) return 0.0;
      return damping_factor(mu, xi, epsilon) * (w * m);
    };
    const auto& xi = p.xi;
    p.active = [band, &xi](double tau) {
      const double a = inverse_omega(tau + band);
      const double b = inverse_omega(tau - band);
      const auto first = std::lower_bound(xi.begin(), xi.end(), a) - xi.begin();
      const auto last = std::upper_bound(xi.begin(), xi.end(), b) - xi.begin();
      return std::pair<std::size_t, std::size_t>(first, last);
    };
    return [&] {
      const auto sup = kernels::kernel_sup_parallel(p);
      double v = 0.0;
      for (double s : sup) v += s * dx;
      return v;
    }();
  }
  const int j = cfg.low_j;
  p.symbol = [j, epsilon](double xi, double tau) -> cplx {
    const double w = dy::eta_leq(1, xi) * dy::chi(j, tau);
    if (w == 0.0) return 0.0;
    return damping_factor(tau - dy::omega(xi), xi, epsilon) * w;
  };
  const auto sup = kernels::kernel_sup_parallel(p);
  double v = 0.0;
  for (double s : sup) v += s * dx;
  return v;
}

}  // namespace

double multiplier_kernel_value(int k, double epsilon, const KernelConfig& cfg) {
  if (k < 0) throw ConfigError("kernel block index must be nonnegative");
  int refine = cfg.refine;
  double prev = kernel_value_at(k, epsilon, cfg, refine);
  for (int d = 0; d < cfg.max_doublings; ++d) {
    refine *= 2;
    const double next = kernel_value_at(k, epsilon, cfg, refine);
    if (std::abs(next - prev) <= cfg.tolerance * std::abs(next)) return next;
    prev = next;
  }
  throw ResolutionError("kernel value did not settle under xi refinement");
}

RatioStudy multiplier_kernel_study(int k, const std::vector<double>& epsilons,
                                   const KernelConfig& cfg) {
  RatioStudy study;
  study.estimate_id = "multiplier_kernel_k" + std::to_string(k);
  study.epsilons = sorted_descending(epsilons);
  for (double e : study.epsilons)
    study.samples.push_back({study.estimate_id, 0, e, 0.0, multiplier_kernel_value(k, e, cfg),
                             static_cast<double>(k)});
  return study;
}

double dissipative_kernel(double x, double tau, double epsilon) {
  if (epsilon == 0.0 || tau == 0.0) return 0.0;
  const cplx a = std::sqrt(tau / cplx(1.0, -epsilon));
  return epsilon * std::abs(tau) / (std::abs(cplx(1.0, -epsilon)) * 2.0 * std::abs(a)) *
         std::exp(-a.real() * std::abs(x));
}

double dissipative_envelope_excess(int k, const std::vector<double>& epsilons, double c_amp,
                                   double c_rate, const KernelConfig& cfg) {
  const double scale = std::ldexp(1.0, k);
  const double lo = 0.1 * scale * scale;
  const double hi = 10.24 * scale * scale;
  const double dx = 2.0 * cfg.half_length / static_cast<double>(cfg.n_points);
  double worst = 0.0;
  for (double e : epsilons) {
    if (e <= 0.0) continue;
    for (int sgn : {-1, 1})
      for (int q = 0; q < cfg.tau_samples; ++q) {
        const double f = cfg.tau_samples > 1 ? double(q) / (cfg.tau_samples - 1) : 0.0;
        const double tau = sgn * lo * std::pow(hi / lo, f);
        for (std::size_t j = 0; j < cfg.n_points; ++j) {
          const double x = -cfg.half_length + static_cast<double>(j) * dx;
          const double bound = c_amp * e * scale * std::exp(-c_rate * e * scale * std::abs(x));
          worst = std::max(worst, dissipative_kernel(x, tau, e) / bound);
        }
      }
  }
  return worst;
}

// ---- bilinear ---------------------------------------------------------------

SpaceTimeSpectral dyadic_block_sample(const Grid& g, const TimeAxis& t, int k, int j,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise;
  SpaceTimeSpectral f = SpaceTimeSpectral::zeros(g, t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.wavenumber(i);
    const double wx = dy::eta(k, xi);
    for (std::size_t n = 0; n < t.n_time; ++n) {
      const double re = noise(rng);
      const double im = noise(rng);
      if (wx == 0.0) continue;
      const double tau = t.tau(n);
      const double w = wx * dy::eta(j, k >= 1 ? tau - dy::omega(xi) : tau);
      if (w != 0.0) f.at(i, n) = w * cplx(re, im);
    }
  }
  return f;
}

namespace {

void require_regime(const Grid& g, const TimeAxis& t, const BilinearRegime& r) {
  if (r.k < 0 || r.k1 < 0 || r.k2 < 0 || r.j_max < 0) throw ConfigError("negative regime index");
  const int hi = std::max({r.k, r.k1, r.k2});
  const int lo = std::min({r.k, r.k1, r.k2});
  if (hi > lo + 30) throw ConfigError("regime indices are not comparable");
  auto xi_reach = [](int k) { return 1.6 * std::ldexp(1.0, k); };
  auto tau_reach = [&](int k) {
    const double m = 1.6 * std::ldexp(1.0, r.j_max);
    return k >= 1 ? xi_reach(k) * xi_reach(k) + m : m;
  };
  if (xi_reach(r.k1) + xi_reach(r.k2) >= g.max_wavenumber() ||
      xi_reach(r.k) >= g.max_wavenumber())
    throw ConfigError("bilinear regime exceeds the spatial frequency grid");
  if (tau_reach(r.k1) + tau_reach(r.k2) >= t.nyquist())
    throw ConfigError("bilinear regime exceeds the temporal frequency grid");
}

}  // namespace

BilinearSides bilinear_sides(const SpaceTimeSpectral& f1, const SpaceTimeSpectral& f2,
                             const BilinearRegime& r, int k_y) {
  ZOptions zo;
  zo.k_y = k_y;
  BilinearSides s;
  s.rhs = zk_norm(f1, r.k1, zo).total * zk_norm(f2, r.k2, zo).total;
  SpaceTimeSpectral c = kernels::convolve_parallel(f1, f2);
  for (std::size_t i = 0; i < c.n_space(); ++i) {
    const double xi = c.grid.wavenumber(i);
    const double w = dy::eta(r.k, xi);
    for (std::size_t n = 0; n < c.n_time(); ++n) {
      if (w == 0.0) {
        c.at(i, n) = 0.0;
        continue;
      }
      const double tau = c.time.tau(n);
      c.at(i, n) *= w / cplx(r.k >= 1 ? tau - dy::omega(xi) : tau, 1.0);
    }
  }
  s.lhs = std::ldexp(zk_norm(c, r.k, zo).total, r.k);
  return s;
}

RatioStudy bilinear_dyadic_study(const BilinearRegime& r, const BilinearConfig& cfg) {
  const Grid g = cfg.lab.grid();
  const TimeAxis t = cfg.lab.time();
  require_regime(g, t, r);
  RatioStudy study;
  study.estimate_id = "bilinear_dyadic_k" + std::to_string(r.k) + "_" + std::to_string(r.k1) +
                      "_" + std::to_string(r.k2);
  study.epsilons = {0.0};
  const std::size_t ns = static_cast<std::size_t>(cfg.samples);
  std::vector<BilinearSides> sides(ns);
  std::vector<int> j1s(ns);
  std::vector<std::uint64_t> seeds(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    seeds[s] = sample_seed(cfg.seed, s);
    std::mt19937_64 rng(seeds[s]);
    j1s[s] = std::uniform_int_distribution<int>(0, r.j_max)(rng);
  }
  run_cells(ns, cfg.workers, [&](std::size_t s) {
    std::mt19937_64 rng(seeds[s]);
    std::uniform_int_distribution<int> pick(0, r.j_max);
    const int j1 = pick(rng);
    const int j2 = pick(rng);
    const auto f1 = dyadic_block_sample(g, t, r.k1, j1, rng());
    const auto f2 = dyadic_block_sample(g, t, r.k2, j2, rng());
    sides[s] = bilinear_sides(f1, f2, r, cfg.k_y);
  });
  for (std::size_t s = 0; s < ns; ++s) {
    if (sides[s].rhs == 0.0 || sides[s].lhs == 0.0) {
      study.notices.push_back("sample " + std::to_string(s) + " has an empty side; excluded");
      continue;
    }
    study.samples.push_back({study.estimate_id, seeds[s], 0.0, 0.0, sides[s].lhs / sides[s].rhs,
                             static_cast<double>(j1s[s])});
  }
  return study;
}

RatioStudy full_bilinear_study(const std::vector<double>& sigmas, const BilinearConfig& cfg) {
  const Grid g = cfg.lab.grid();
  const TimeAxis t = cfg.lab.time();
  const double band = 0.25 * g.max_wavenumber();
  const DataFamily family = random_smooth_family(band);
  RatioStudy study;
  study.estimate_id = "full_bilinear";
  study.epsilons = {0.0};
  ZOptions zo;
  zo.k_y = cfg.k_y;
  const std::size_t ns = static_cast<std::size_t>(cfg.samples);
  std::vector<NormBreakdown> fu(ns), fv(ns), lhs(ns);
  std::vector<std::uint64_t> seeds(ns);
  for (std::size_t s = 0; s < ns; ++s) seeds[s] = sample_seed(cfg.seed, s);
  run_cells(ns, cfg.workers, [&](std::size_t s) {
    const auto u = windowed_free_solution(family(g, 2 * seeds[s]), 0.0, t);
    const auto v = windowed_free_solution(family(g, 2 * seeds[s] + 1), 0.0, t);
    fu[s] = fsigma_norm(u, 0.0, zo);
    fv[s] = fsigma_norm(v, 0.0, zo);
    // d_x (u v) slice by slice; the data are band-limited to a quarter of the grid.
    SpaceTimeField w = SpaceTimeField::zeros(g, t);
    PhysicalField p = PhysicalField::zeros(g);
    for (std::size_t n = 0; n < t.n_time; ++n) {
      for (std::size_t j = 0; j < g.size(); ++j) p.values[j] = u.at(j, n) * v.at(j, n);
      const PhysicalField d = to_physical(derivative(to_spectral(p), 1));
      for (std::size_t j = 0; j < g.size(); ++j) w.at(j, n) = d.values[j];
    }
    lhs[s] = nsigma_norm(w, 0.0, zo);
  });
  for (std::size_t s = 0; s < ns; ++s) {
    for (double sigma : sigmas) {
      const double rhs = reweight(fu[s], sigma) * fv[s].total + fu[s].total * reweight(fv[s], sigma);
      if (rhs == 0.0) {
        study.notices.push_back("sample " + std::to_string(s) + " has zero data; excluded");
        continue;
      }
      study.samples.push_back({study.estimate_id, seeds[s], 0.0, sigma,
                               reweight(lhs[s], sigma) / rhs, 0.0});
    }
  }
  return study;
}

}  // namespace bob
