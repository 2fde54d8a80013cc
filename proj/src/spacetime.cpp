#include "bob/spacetime.hpp"

#include <cmath>
#include <numbers>

#include "bob/errors.hpp"
#include "bob/fft.hpp"

namespace bob {

TimeAxis TimeAxis::make(double t_start, double duration, std::size_t n_time) {
  if (!(duration > 0.0) || !std::isfinite(duration) || !std::isfinite(t_start))
    throw ConfigError("time window must have positive finite duration");
  if (n_time < 4 || n_time % 2 != 0) throw ConfigError("time sample count must be even and >= 4");
  return TimeAxis{t_start, duration, n_time};
}

double TimeAxis::dtau() const { return 2.0 * std::numbers::pi / duration; }

double TimeAxis::tau(std::size_t n) const {
  const auto m = static_cast<long>(n_time);
  const auto k = static_cast<long>(n);
  return dtau() * static_cast<double>(k < m / 2 ? k : k - m);
}

double TimeAxis::nyquist() const { return dtau() * static_cast<double>(n_time / 2); }

int TimeAxis::top_block() const { return static_cast<int>(std::floor(std::log2(nyquist()))); }

int TimeAxis::homogeneous_floor() const {
  return static_cast<int>(std::ceil(std::log2(dtau()))) - 1;
}

SpaceTimeField SpaceTimeField::zeros(const Grid& g, const TimeAxis& t) {
  return {g, t, std::vector<double>(g.size() * t.n_time, 0.0)};
}

SpaceTimeSpectral SpaceTimeSpectral::zeros(const Grid& g, const TimeAxis& t) {
  return {g, t, std::vector<cplx>(g.size() * t.n_time)};
}

SpaceTimeSpectral to_spacetime_spectral(const SpaceTimeField& u) {
  SpaceTimeSpectral f{u.grid, u.time, std::vector<cplx>(u.values.begin(), u.values.end())};
  const std::size_t n = u.grid.size();
  const std::size_t m = u.time.n_time;
  fft::forward_many(f.coeffs.data(), m, n, 1, m);
  fft::forward_many(f.coeffs.data(), n, m, m, 1);
  return f;
}

SpaceTimeField to_spacetime_physical(const SpaceTimeSpectral& f) {
  std::vector<cplx> buf = f.coeffs;
  const std::size_t n = f.grid.size();
  const std::size_t m = f.time.n_time;
  fft::inverse_many(buf.data(), n, m, m, 1);
  fft::inverse_many(buf.data(), m, n, 1, m);
  SpaceTimeField u = SpaceTimeField::zeros(f.grid, f.time);
  for (std::size_t i = 0; i < buf.size(); ++i) u.values[i] = buf[i].real();
  return u;
}

SpaceTimeField spacetime_from_slices(const Grid& g, const TimeAxis& t,
                                     const std::function<SpectralField(double)>& slice) {
  SpaceTimeField u = SpaceTimeField::zeros(g, t);
  for (std::size_t n = 0; n < t.n_time; ++n) {
    const SpectralField s = slice(t.t(n));
    require_same_grid(s.grid, g);
    const PhysicalField p = to_physical(s);
    for (std::size_t j = 0; j < g.size(); ++j) u.at(j, n) = p.values[j];
  }
  return u;
}

SpaceTimeSpectral multiply(const SpaceTimeSpectral& f,
                           const std::function<cplx(double, double)>& m) {
  SpaceTimeSpectral out = f;
  for (std::size_t i = 0; i < f.n_space(); ++i) {
    const double xi = f.grid.wavenumber(i);
    for (std::size_t n = 0; n < f.n_time(); ++n) out.at(i, n) *= m(xi, f.time.tau(n));
  }
  return out;
}

double weighted_l2(const SpaceTimeSpectral& f,
                   const std::function<double(double, double)>& weight) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.n_space(); ++i) {
    const double xi = f.grid.wavenumber(i);
    for (std::size_t n = 0; n < f.n_time(); ++n) {
      const double w = weight(xi, f.time.tau(n));
      if (w != 0.0) s += w * w * std::norm(f.at(i, n));
    }
  }
  const double c = f.continuum_scale();
  return std::sqrt(s * c * c * f.cell_measure());
}

double l2_norm(const SpaceTimeSpectral& f) {
  return weighted_l2(f, [](double, double) { return 1.0; });
}

double mass_fraction_outside(const SpaceTimeSpectral& f,
                             const std::function<bool(double, double)>& inside) {
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t i = 0; i < f.n_space(); ++i) {
    const double xi = f.grid.wavenumber(i);
    for (std::size_t n = 0; n < f.n_time(); ++n) {
      const double a = std::norm(f.at(i, n));
      total += a;
      if (a != 0.0 && !inside(xi, f.time.tau(n))) outside += a;
    }
  }
  return total > 0.0 ? outside / total : 0.0;
}

namespace {
void require_same_layout(const SpaceTimeSpectral& a, const SpaceTimeSpectral& b) {
  require_same_grid(a.grid, b.grid);
  if (!(a.time == b.time)) throw ConfigError("time axis mismatch");
}
}  // namespace

SpaceTimeSpectral operator+(const SpaceTimeSpectral& a, const SpaceTimeSpectral& b) {
  require_same_layout(a, b);
  SpaceTimeSpectral out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

SpaceTimeSpectral operator-(const SpaceTimeSpectral& a, const SpaceTimeSpectral& b) {
  require_same_layout(a, b);
  SpaceTimeSpectral out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

SpaceTimeSpectral operator*(cplx c, const SpaceTimeSpectral& a) {
  SpaceTimeSpectral out = a;
  for (auto& v : out.coeffs) v *= c;
  return out;
}

}  // namespace bob
