#include "bob/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bob/dyadic.hpp"
#include "bob/errors.hpp"
#include "bob/fft.hpp"
#include "bob/kernels.hpp"

namespace bob {

cplx DispersionParams::lambda(double xi) const {
  return {-epsilon * xi * xi, dyadic::omega(xi)};
}

namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
}

std::vector<cplx> symbols(const Grid& g, double epsilon) {
  const DispersionParams p{epsilon};
  std::vector<cplx> l(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) l[i] = p.lambda(g.wavenumber(i));
  return l;
}

long dealias_cutoff(const Grid& g) { return static_cast<long>(g.size() / 3); }

// Fourier coefficients of d/dx (u^2 / 2), dealiased, into `out`; `work` is scratch.
void nonlinear_into(const Grid& g, const std::vector<cplx>& u_hat, std::vector<cplx>& work,
                    std::vector<cplx>& out) {
  const std::size_t n = g.size();
  const long cut = dealias_cutoff(g);
  work.resize(n);
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) work[i] = std::abs(g.mode(i)) <= cut ? u_hat[i] : cplx{};
  fft::inverse(work, work);
  for (auto& v : work) v = 0.5 * v.real() * v.real();
  fft::forward(work, work);
  for (std::size_t i = 0; i < n; ++i) {
    const long m = g.mode(i);
    out[i] = std::abs(m) <= cut ? cplx(0.0, g.wavenumber(i)) * work[i] : cplx{};
  }
}

double spectral_l2(const Grid& g, const std::vector<cplx>& c) {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  return std::sqrt(s * g.dx() / static_cast<double>(g.size()));
}

PhysicalField physical_of(const Grid& g, const std::vector<cplx>& c) {
  return to_physical(SpectralField{g, c});
}

}  // namespace

SpectralField apply_semigroup(const SpectralField& phi_hat, double t, double epsilon) {
  require_epsilon(epsilon);
  if (t < 0.0 && epsilon > 0.0) throw DomainError("dissipative flow cannot run backward in time");
  SpectralField out = phi_hat;
  const DispersionParams p{epsilon};
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] *= std::exp(t * p.lambda(phi_hat.grid.wavenumber(i)));
  return out;
}

SpectralField apply_semigroup_even(const SpectralField& phi_hat, double t, double epsilon) {
  require_epsilon(epsilon);
  SpectralField out = phi_hat;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    const double xi = phi_hat.grid.wavenumber(i);
    out.coeffs[i] *= std::exp(cplx(-std::abs(t) * epsilon * xi * xi, t * dyadic::omega(xi)));
  }
  return out;
}

SpectralField nonlinear_term(const SpectralField& u_hat) {
  std::vector<cplx> work;
  SpectralField out = SpectralField::zeros(u_hat.grid);
  nonlinear_into(u_hat.grid, u_hat.coeffs, work, out.coeffs);
  return out;
}

PhysicalField nonlinear_term(const PhysicalField& u) {
  return to_physical(nonlinear_term(to_spectral(u)));
}

EtdCoefficients etdrk4_coefficients(const std::vector<cplx>& lambda, double h) {
  constexpr int kContour = 32;
  EtdCoefficients c;
  const std::size_t n = lambda.size();
  c.e.resize(n);
  c.e2.resize(n);
  c.q.resize(n);
  c.f1.resize(n);
  c.f2.resize(n);
  c.f3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx lh = lambda[i] * h;
    c.e[i] = std::exp(lh);
    c.e2[i] = std::exp(0.5 * lh);
    cplx q{}, f1{}, f2{}, f3{};
    for (int j = 1; j <= kContour; ++j) {
      const cplx r = std::polar(1.0, std::numbers::pi * (j - 0.5) / kContour);
      const cplx z = lh + r;
      const cplx ez = std::exp(z);
      const cplx z3 = z * z * z;
      q += (std::exp(0.5 * z) - 1.0) / z;
      f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
      f2 += (2.0 + z + ez * (-2.0 + z)) / z3;
      f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
    }
    c.q[i] = h * q / double(kContour);
    c.f1[i] = h * f1 / double(kContour);
    c.f2[i] = h * f2 / double(kContour);
    c.f3[i] = h * f3 / double(kContour);
  }
  return c;
}

Trajectory integrate(const PhysicalField& phi, double epsilon, double horizon, double dt,
                     const IntegrateOptions& opt) {
  require_epsilon(epsilon);
  const Grid& g = phi.grid;
  if (phi.values.size() != g.size()) throw ConfigError("initial data length does not match grid");
  if (!phi.is_finite()) throw ConfigError("initial data must be finite");
  if (!(horizon > 0.0 && horizon <= 1.0)) throw ConfigError("time horizon must lie in (0, 1]");
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (opt.snapshots == 0) throw ConfigError("snapshot count must be positive");
  const double wmax = g.max_wavenumber() * g.max_wavenumber();
  if (dt * wmax > kMaxDispersiveStep) {
    std::ostringstream os;
    os << "time step " << dt << " too large: dt * max|omega| = " << dt * wmax << " > "
       << kMaxDispersiveStep;
    throw ConfigError(os.str());
  }
  const double interval = horizon / static_cast<double>(opt.snapshots);
  const auto steps = static_cast<std::size_t>(std::llround(interval / dt));
  if (steps == 0 || std::abs(static_cast<double>(steps) * dt - interval) > 1e-9 * interval)
    throw ConfigError("snapshot interval must be a whole number of time steps");

  Trajectory traj{g, epsilon, dt, "etdrk4", true, {}, {}};
  const auto lambda = symbols(g, epsilon);
  const auto c = etdrk4_coefficients(lambda, dt);
  std::vector<cplx> v = to_spectral(phi).coeffs;
  const double start = spectral_l2(g, v);
  const std::size_t n = g.size();
  std::vector<cplx> work, nv(n), na(n), nb(n), nc(n), a(n), b(n), cc(n);
  auto nonlin = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
    if (!opt.nonlinear) {
      std::fill(out.begin(), out.end(), cplx{});
      return;
    }
    nonlinear_into(g, in, work, out);
    for (auto& o : out) o = -o;
  };

  traj.times.push_back(0.0);
  traj.snapshots.push_back(phi);
  for (std::size_t s = 1; s <= opt.snapshots; ++s) {
    for (std::size_t step = 0; step < steps; ++step) {
      nonlin(v, nv);
      for (std::size_t i = 0; i < n; ++i) a[i] = c.e2[i] * v[i] + c.q[i] * nv[i];
      nonlin(a, na);
      for (std::size_t i = 0; i < n; ++i) b[i] = c.e2[i] * v[i] + c.q[i] * na[i];
      nonlin(b, nb);
      for (std::size_t i = 0; i < n; ++i) cc[i] = c.e2[i] * a[i] + c.q[i] * (2.0 * nb[i] - nv[i]);
      nonlin(cc, nc);
      for (std::size_t i = 0; i < n; ++i)
        v[i] = c.e[i] * v[i] + nv[i] * c.f1[i] + 2.0 * (na[i] + nb[i]) * c.f2[i] + nc[i] * c.f3[i];
    }
    const double size = spectral_l2(g, v);
    if (!std::isfinite(size) || size > 10.0 * start + 1e-300) {
      std::ostringstream os;
      os << "solution diverged near t = " << static_cast<double>(s) * interval
         << " (L2 norm " << size << ", initial " << start << ")";
      throw DivergenceError(os.str());
    }
    traj.times.push_back(static_cast<double>(s) * interval);
    traj.snapshots.push_back(physical_of(g, v));
  }
  return traj;
}

std::vector<Trajectory> picard_solve(const PhysicalField& phi, double epsilon, double horizon,
                                     int iterations, std::size_t nodes) {
  require_epsilon(epsilon);
  if (iterations < 1) throw ConfigError("Picard iteration count must be at least 1");
  if (!(horizon > 0.0 && horizon <= 1.0)) throw ConfigError("time horizon must lie in (0, 1]");
  if (nodes < 2) throw ConfigError("Picard quadrature needs at least two intervals");
  const Grid& g = phi.grid;
  const double h = horizon / static_cast<double>(nodes);
  const auto lambda = symbols(g, epsilon);
  const SpectralField phi_hat = to_spectral(phi);

  std::vector<double> times(nodes + 1);
  kernels::Slices free(nodes + 1);
  for (std::size_t i = 0; i <= nodes; ++i) {
    times[i] = h * static_cast<double>(i);
    free[i] = apply_semigroup(phi_hat, times[i], epsilon).coeffs;
  }
  auto as_trajectory = [&](const kernels::Slices& s) {
    Trajectory t{g, epsilon, h, "picard", true, times, {}};
    for (const auto& c : s) t.snapshots.push_back(physical_of(g, c));
    return t;
  };
  auto sup_l2 = [&](const kernels::Slices& s) {
    double m = 0.0;
    for (const auto& c : s) m = std::max(m, spectral_l2(g, c));
    return m;
  };

  const double base = sup_l2(free);
  std::vector<Trajectory> out{as_trajectory(free)};
  kernels::Slices current = free;
  kernels::Slices forcing(nodes + 1);
  std::vector<cplx> work;
  for (int it = 1; it <= iterations; ++it) {
    for (std::size_t l = 0; l <= nodes; ++l) nonlinear_into(g, current[l], work, forcing[l]);
    const auto duhamel = kernels::duhamel_parallel(forcing, lambda, h);
    for (std::size_t i = 0; i <= nodes; ++i)
      for (std::size_t m = 0; m < g.size(); ++m) current[i][m] = free[i][m] - duhamel[i][m];
    const double size = sup_l2(current);
    if (!std::isfinite(size) || size > 10.0 * base + 1e-300) {
      std::ostringstream os;
      os << "Picard iterate " << it << " grew to " << size << " (free solution " << base << ")";
      throw DivergenceError(os.str());
    }
    out.push_back(as_trajectory(current));
  }
  return out;
}

Trajectory solution_map(const PhysicalField& phi, double epsilon, double horizon, double dt,
                        std::size_t snapshots) {
  IntegrateOptions opt;
  opt.snapshots = snapshots;
  if (epsilon > 0.0) return integrate(phi, epsilon, horizon, dt, opt);

  const Grid& coarse = phi.grid;
  const Grid fine = Grid::make(coarse.half_length(), 2 * coarse.size());
  const SpectralField c = to_spectral(phi);
  SpectralField f = SpectralField::zeros(fine);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (coarse.is_nyquist(i)) continue;
    f.at_mode(coarse.mode(i)) = 2.0 * c.coeffs[i];
  }
  Trajectory ref = integrate(to_physical(f), 0.0, horizon, 0.5 * dt, opt);
  Trajectory out{coarse, 0.0, dt, "etdrk4-refined", true, ref.times, {}};
  for (const auto& s : ref.snapshots) out.snapshots.push_back(to_physical(restrict_to(to_spectral(s), coarse)));
  return out;
}

void Trajectory::write_csv(std::ostream& os) const {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "# schema=v1\n";
  os << "# trajectory method=" << method << " epsilon=" << num(epsilon) << " dt=" << num(dt)
     << " L=" << num(grid.half_length()) << " N=" << grid.size()
     << " dealiased=" << (dealiased ? 1 : 0) << '\n';
  os << 't';
  for (std::size_t j = 0; j < grid.size(); ++j) os << ",u" << j;
  os << '\n';
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    os << num(times[s]);
    for (double v : snapshots[s].values) os << ',' << num(v);
    os << '\n';
  }
}

Trajectory Trajectory::read_csv(std::istream& is) {
  std::string line;
  std::string method;
  double epsilon = 0.0, dt = 0.0, half = 0.0;
  std::size_t n = 0;
  int dealiased = 1;
  bool have_meta = false;
  while (std::getline(is, line)) {
    if (line.rfind("# trajectory", 0) == 0) {
      std::istringstream ss(line.substr(12));
      std::string kv;
      while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "method") method = val;
        else if (key == "epsilon") epsilon = std::stod(val);
        else if (key == "dt") dt = std::stod(val);
        else if (key == "L") half = std::stod(val);
        else if (key == "N") n = std::stoul(val);
        else if (key == "dealiased") dealiased = std::stoi(val);
      }
      have_meta = true;
    } else if (!line.empty() && line[0] == 't') {
      break;
    }
  }
  if (!have_meta) throw ConfigError("trajectory file lacks its metadata record");
  Trajectory t{Grid::make(half, n), epsilon, dt, method, dealiased != 0, {}, {}};
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    t.times.push_back(std::stod(cell));
    PhysicalField f = PhysicalField::zeros(t.grid);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::getline(ss, cell, ',')) throw ConfigError("trajectory row is too short");
      f.values[j] = std::stod(cell);
    }
    t.snapshots.push_back(std::move(f));
  }
  return t;
}

}  // namespace bob
