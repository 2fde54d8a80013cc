#pragma once

// Pointwise Littlewood-Paley projections of spectral data.

#include "bob/dyadic.hpp"
#include "bob/grid.hpp"
#include "bob/spacetime.hpp"

namespace bob {

enum class Axis {
  frequency,       // symbol evaluated at xi
  time_frequency,  // symbol evaluated at tau
  modulation,      // symbol evaluated at tau - omega(xi)
};

// Only Axis::frequency is meaningful for a single-time field; other axes
// throw ConfigError.
SpectralField project(const SpectralField& g, const dyadic::DyadicSymbol& s,
                      Axis axis = Axis::frequency);
SpaceTimeSpectral project(const SpaceTimeSpectral& f, const dyadic::DyadicSymbol& s, Axis axis);

}  // namespace bob
