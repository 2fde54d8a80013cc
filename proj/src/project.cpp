#include "bob/project.hpp"

#include "bob/errors.hpp"

namespace bob {

SpectralField project(const SpectralField& g, const dyadic::DyadicSymbol& s, Axis axis) {
  if (axis != Axis::frequency) throw ConfigError("single-time fields only project in frequency");
  SpectralField out = g;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= s(g.grid.wavenumber(i));
  return out;
}

SpaceTimeSpectral project(const SpaceTimeSpectral& f, const dyadic::DyadicSymbol& s, Axis axis) {
  SpaceTimeSpectral out = f;
  for (std::size_t i = 0; i < f.n_space(); ++i) {
    const double xi = f.grid.wavenumber(i);
    const double w_xi = axis == Axis::frequency ? s(xi) : 1.0;
    for (std::size_t n = 0; n < f.n_time(); ++n) {
      double w = w_xi;
      if (axis == Axis::time_frequency) w = s(f.time.tau(n));
      if (axis == Axis::modulation) w = s(f.time.tau(n) - dyadic::omega(xi));
      out.at(i, n) *= w;
    }
  }
  return out;
}

}  // namespace bob
