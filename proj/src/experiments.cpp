#include "bob/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

#include "bob/errors.hpp"
#include "bob/norms.hpp"

namespace bob {

void SweepResult::refit() {
  fit.reset();
  if (records.size() < 4) return;
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (!(r.param > 0.0 && r.measurement > 0.0)) return;
    x.push_back(r.param);
    y.push_back(r.measurement);
  }
  fit = fit_loglog(x, y);
}

double SweepResult::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  throw ConfigError("no summary value named " + key);
}

void SweepResult::write_csv(std::ostream& os) const {
  char buf[128];
  os << "# schema=v1\n" << "experiment_id,param,measurement,aux\n";
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", r.param, r.measurement, r.aux);
    os << experiment_id << buf;
  }
}

void SweepResult::write_summary(std::ostream& os) const {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "result.experiment_id=" << experiment_id << '\n';
  os << "result.records=" << records.size() << '\n';
  if (fit) {
    os << "result.slope=" << num(fit->slope) << '\n';
    os << "result.intercept=" << num(fit->intercept) << '\n';
    os << "result.r2=" << num(fit->r2) << '\n';
  } else {
    os << "result.fit=none\n";
  }
  for (const auto& [k, v] : extras) os << "result." << k << '=' << num(v) << '\n';
  for (const auto& n : notes) os << "result.note=" << n << '\n';
}

PhysicalField default_data(const Grid& g, double delta, double width) {
  if (!(delta >= 0.0) || !(width > 0.0)) throw ConfigError("delta must be >= 0 and width > 0");
  PhysicalField phi = PhysicalField::sample(g, [width](double x) {
    return std::exp(-x * x / (width * width));
  });
  const double unit = refined_sobolev_norm(to_spectral(phi), 0.0).total;
  const double a = 0.5 * delta / unit;
  for (auto& v : phi.values) v *= a;
  return phi;
}

namespace {

double refined_of(const PhysicalField& f, double sigma) {
  if (l2_norm(f) == 0.0) return 0.0;
  return refined_sobolev_norm(to_spectral(f), sigma).total;
}

double sup_difference(const Trajectory& a, const Trajectory& b, double sigma) {
  if (a.snapshots.size() != b.snapshots.size()) throw ConfigError("trajectories differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i)
    worst = std::max(worst, refined_of(a.snapshots[i] - b.snapshots[i], sigma));
  return worst;
}

void require_monotone(const std::vector<double>& p) {
  if (p.size() < 2) return;
  const bool up = p[1] > p[0];
  for (std::size_t i = 1; i < p.size(); ++i)
    if (up ? !(p[i] > p[i - 1]) : !(p[i] < p[i - 1]))
      throw ConfigError("sweep parameters must be strictly monotone");
}

template <class Fn>
void run_cells(std::size_t count, int workers, Fn&& fn) {
  std::exception_ptr error;
  const int team = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(bob_sweep)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

SweepResult inviscid_sweep(const PhysicalField& phi, double sigma,
                           const std::vector<double>& epsilons, const SweepOptions& opt) {
  require_monotone(epsilons);
  for (double e : epsilons)
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("sweep epsilons must lie in (0, 1]");
  SweepResult out;
  out.experiment_id = "inviscid_sweep";
  const double h2 = refined_of(phi, 2.0);
  const Trajectory ref = solution_map(phi, 0.0, opt.horizon, opt.dt, opt.snapshots);
  std::vector<double> diff(epsilons.size());
  run_cells(epsilons.size(), opt.workers, [&](std::size_t i) {
    diff[i] = sup_difference(solution_map(phi, epsilons[i], opt.horizon, opt.dt, opt.snapshots),
                             ref, sigma);
  });
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    out.records.push_back({epsilons[i], diff[i], h2 > 0.0 ? diff[i] / (epsilons[i] * h2) : 0.0});
  out.refit();
  // Differences should shrink with eps; a violation is reported, not raised.
  for (std::size_t i = 1; i < out.records.size(); ++i) {
    const auto& a = out.records[i - 1];
    const auto& b = out.records[i];
    const bool ok = a.param > b.param ? b.measurement <= a.measurement : a.measurement <= b.measurement;
    if (!ok) out.notes.push_back("difference not monotone in eps near " + std::to_string(b.param));
  }
  out.extras.push_back({"phi_h2", h2});
  return out;
}

LipschitzRecord lipschitz_probe(const PhysicalField& phi, const PhysicalField& phi2, double sigma,
                                double epsilon, const SweepOptions& opt) {
  require_same_grid(phi.grid, phi2.grid);
  LipschitzRecord r;
  r.epsilon = epsilon;
  r.denominator = refined_of(phi - phi2, sigma);
  if (r.denominator == 0.0) throw DomainError("Lipschitz probe needs two different data");
  r.numerator = sup_difference(solution_map(phi, epsilon, opt.horizon, opt.dt, opt.snapshots),
                               solution_map(phi2, epsilon, opt.horizon, opt.dt, opt.snapshots),
                               sigma);
  r.ratio = r.numerator / r.denominator;
  return r;
}

SweepResult scaling_check(const std::function<double(double)>& phi, const Grid& g, double sigma,
                          const std::vector<double>& lambdas) {
  require_monotone(lambdas);
  SweepResult out;
  out.experiment_id = "scaling_check";
  double base = 0.0, base_b0 = 0.0;
  {
    const NormBreakdown b = refined_sobolev_norm(
        to_spectral(PhysicalField::sample(g, phi)), sigma);
    base = b.total;
    base_b0 = b.blocks.front().contribution;
  }
  if (base == 0.0) throw DomainError("scaling check needs nonzero data");
  for (double lam : lambdas) {
    if (!(lam > 0.0 && lam <= 1.0)) throw ConfigError("scaling factors must lie in (0, 1]");
    const PhysicalField f = PhysicalField::sample(g, [&](double x) { return lam * phi(lam * x); });
    // Resolution: negligible mass at the edge of the box and in the top spectral band.
    double peak = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double v = std::abs(f.values[j]);
      peak = std::max(peak, v);
      if (std::abs(g.x(j)) >= 0.95 * g.half_length()) edge = std::max(edge, v);
    }
    const SpectralField fh = to_spectral(f);
    double speak = 0.0, stop = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = std::abs(fh.coeffs[i]);
      speak = std::max(speak, v);
      if (std::abs(g.wavenumber(i)) >= 0.95 * g.max_wavenumber()) stop = std::max(stop, v);
    }
    if (edge > 1e-6 * peak || stop > 1e-6 * speak)
      throw ConfigError("scaled data not resolved on the grid at lambda = " + std::to_string(lam));
    const NormBreakdown b = refined_sobolev_norm(fh, sigma);
    out.records.push_back({lam, b.total / base, b.blocks.front().contribution / base_b0});
  }
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : out.records) {
    lo = std::min(lo, r.measurement);
    hi = std::max(hi, r.measurement);
  }
  out.extras.push_back({"min_ratio", lo});
  out.extras.push_back({"max_ratio", hi});
  return out;
}

SweepResult picard_report(const PhysicalField& phi, double epsilon, int iterations,
                          const PicardOptions& opt) {
  if (iterations < 1) throw ConfigError("Picard report needs at least one iteration");
  if (opt.h0_stride == 0) throw ConfigError("H0 stride must be positive");
  SweepResult out;
  out.experiment_id = "picard";
  std::vector<Trajectory> it;
  try {
    it = picard_solve(phi, epsilon, opt.horizon, iterations, opt.nodes);
  } catch (const DivergenceError& e) {
    out.notes.push_back(std::string("diverged: ") + e.what());
    out.extras.push_back({"diverged", 1.0});
    return out;
  }
  double size0 = 0.0;
  for (const auto& s : it[0].snapshots) size0 = std::max(size0, l2_norm(s));
  for (std::size_t n = 1; n < it.size(); ++n) {
    double l2 = 0.0, h0 = 0.0;
    for (std::size_t i = 0; i < it[n].snapshots.size(); ++i) {
      const PhysicalField d = it[n].snapshots[i] - it[n - 1].snapshots[i];
      l2 = std::max(l2, l2_norm(d));
      if (i % opt.h0_stride == 0) h0 = std::max(h0, refined_of(d, 0.0));
    }
    out.records.push_back({static_cast<double>(n), l2, h0});
  }
  double max_ratio = 0.0;
  int counted = 0;
  for (std::size_t n = 1; n < out.records.size(); ++n) {
    const double prev = out.records[n - 1].measurement;
    if (prev <= opt.roundoff_floor * size0 || out.records[n].measurement <= opt.roundoff_floor * size0) {
      out.notes.push_back("ratio " + std::to_string(n + 1) + " below roundoff floor; excluded");
      continue;
    }
    max_ratio = std::max(max_ratio, out.records[n].measurement / prev);
    ++counted;
  }
  out.extras.push_back({"max_ratio", max_ratio});
  out.extras.push_back({"ratios_counted", static_cast<double>(counted)});
  if (opt.etd_dt > 0.0) {
    IntegrateOptions io;
    io.snapshots = opt.nodes;
    const Trajectory etd = integrate(phi, epsilon, opt.horizon, opt.etd_dt, io);
    double gap = 0.0;
    for (std::size_t i = 0; i < etd.snapshots.size(); ++i)
      gap = std::max(gap, l2_norm(etd.snapshots[i] - it.back().snapshots[i]));
    out.extras.push_back({"etd_gap", gap});
  }
  out.extras.push_back({"diverged", 0.0});
  return out;
}

SweepResult energy_report(const Trajectory& traj) {
  SweepResult out;
  out.experiment_id = "energy";
  const std::size_t n = traj.snapshots.size();
  std::vector<double> e(n), ex(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = l2_norm(traj.snapshots[i]);
    const double b = l2_norm(derivative(to_spectral(traj.snapshots[i]), 1));
    e[i] = a * a;
    ex[i] = b * b;
  }
  double worst = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double residual = 0.0;
    if (i >= 1 && i + 1 < n) {
      const double h = traj.times[i + 1] - traj.times[i - 1];
      residual = (e[i + 1] - e[i - 1]) / h +
                 2.0 * traj.epsilon * (ex[i - 1] + 4.0 * ex[i] + ex[i + 1]) / 6.0;
      worst = std::max(worst, std::abs(residual));
    }
    if (e[0] > 0.0) drift = std::max(drift, std::abs(std::sqrt(e[i] / e[0]) - 1.0));
    out.records.push_back({traj.times[i], e[i], residual});
  }
  out.extras.push_back({"max_abs_residual", worst});
  out.extras.push_back({"max_relative_drift", drift});
  return out;
}

}  // namespace bob
