#pragma once

// Space-time fields on [-L, L) x [t_start, t_start + T) and their 2-D spectra.
// Time frequencies are tau_n = 2 pi n / T in FFT order; the continuum transform
// F(u)(xi, tau) is approximated by dx * dt * (2-D DFT), and L^2 norms in
// (xi, tau) carry the measure (pi / L) * (2 pi / T).

#include <cstddef>
#include <functional>
#include <vector>

#include "bob/grid.hpp"

namespace bob {

struct TimeAxis {
  double t_start = 0.0;
  double duration = 1.0;
  std::size_t n_time = 16;

  // Throws ConfigError unless duration > 0 and n_time is an even number >= 4.
  static TimeAxis make(double t_start, double duration, std::size_t n_time);
  double dt() const { return duration / static_cast<double>(n_time); }
  double t(std::size_t n) const { return t_start + static_cast<double>(n) * dt(); }
  double dtau() const;
  double tau(std::size_t n) const;
  double nyquist() const;
  // Highest modulation block resolved by the tau grid: floor(log2(M pi / T)).
  int top_block() const;
  // Lowest homogeneous tau block resolved: ceil(log2(2 pi / T)) - 1.
  int homogeneous_floor() const;
  friend bool operator==(const TimeAxis&, const TimeAxis&) = default;
};

struct SpaceTimeField {
  Grid grid;
  TimeAxis time;
  std::vector<double> values;  // values[j * M + n] = u(x_j, t_n)

  static SpaceTimeField zeros(const Grid& g, const TimeAxis& t);
  double& at(std::size_t j, std::size_t n) { return values[j * time.n_time + n]; }
  double at(std::size_t j, std::size_t n) const { return values[j * time.n_time + n]; }
};

struct SpaceTimeSpectral {
  Grid grid;
  TimeAxis time;
  std::vector<cplx> coeffs;  // coeffs[i * M + n], both axes in FFT order

  static SpaceTimeSpectral zeros(const Grid& g, const TimeAxis& t);
  std::size_t n_space() const { return grid.size(); }
  std::size_t n_time() const { return time.n_time; }
  cplx& at(std::size_t i, std::size_t n) { return coeffs[i * time.n_time + n]; }
  const cplx& at(std::size_t i, std::size_t n) const { return coeffs[i * time.n_time + n]; }
  // Scale converting a DFT coefficient to the continuum transform value.
  double continuum_scale() const { return grid.dx() * time.dt(); }
  // Cell measure d(xi) d(tau).
  double cell_measure() const { return grid.dxi() * time.dtau(); }
};

SpaceTimeSpectral to_spacetime_spectral(const SpaceTimeField& u);
SpaceTimeField to_spacetime_physical(const SpaceTimeSpectral& f);

// Space-time field whose spatial spectrum at each time node is slice(t).
SpaceTimeField spacetime_from_slices(const Grid& g, const TimeAxis& t,
                                     const std::function<SpectralField(double)>& slice);

// Pointwise multiplier m(xi, tau).
SpaceTimeSpectral multiply(const SpaceTimeSpectral& f,
                           const std::function<cplx(double xi, double tau)>& m);

// sqrt(int int |w(xi, tau) F|^2 dxi dtau) with the continuum scaling.
double weighted_l2(const SpaceTimeSpectral& f,
                   const std::function<double(double xi, double tau)>& weight);
double l2_norm(const SpaceTimeSpectral& f);

// Relative squared mass of f outside a region (0 when f = 0).
double mass_fraction_outside(const SpaceTimeSpectral& f,
                             const std::function<bool(double xi, double tau)>& inside);

SpaceTimeSpectral operator+(const SpaceTimeSpectral& a, const SpaceTimeSpectral& b);
SpaceTimeSpectral operator-(const SpaceTimeSpectral& a, const SpaceTimeSpectral& b);
SpaceTimeSpectral operator*(cplx c, const SpaceTimeSpectral& a);

}  // namespace bob
