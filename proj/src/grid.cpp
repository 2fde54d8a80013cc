#include "bob/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bob/errors.hpp"
#include "bob/fft.hpp"

namespace bob {

Grid Grid::make(double half_length, std::size_t n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    std::ostringstream os;
    os << "grid half-length must be positive and finite, got " << half_length;
    throw ConfigError(os.str());
  }
  if (n_points < 16 || (n_points & (n_points - 1)) != 0) {
    std::ostringstream os;
    os << "grid size must be a power of two >= 16, got " << n_points;
    throw ConfigError(os.str());
  }
  return Grid(half_length, n_points);
}

double Grid::dxi() const { return std::numbers::pi / half_length_; }

std::size_t Grid::index_of_mode(long m) const {
  const auto n = static_cast<long>(n_);
  if (m < -n / 2 || m >= n / 2) throw ConfigError("mode outside grid range");
  return static_cast<std::size_t>(m >= 0 ? m : m + n);
}

double Grid::wavenumber(std::size_t i) const {
  return std::numbers::pi * static_cast<double>(mode(i)) / half_length_;
}

double Grid::max_wavenumber() const {
  return std::numbers::pi * static_cast<double>(n_ / 2) / half_length_;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> xi(n_);
  for (std::size_t i = 0; i < n_; ++i) xi[i] = wavenumber(i);
  return xi;
}

std::vector<double> Grid::sorted_wavenumbers() const {
  auto xi = wavenumbers();
  std::sort(xi.begin(), xi.end());
  return xi;
}

bool PhysicalField::is_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ConfigError("grid mismatch");
}

SpectralField to_spectral(const PhysicalField& f) {
  if (f.values.size() != f.grid.size()) throw ConfigError("field length does not match grid");
  SpectralField out{f.grid, std::vector<cplx>(f.values.begin(), f.values.end())};
  fft::forward(out.coeffs, out.coeffs);
  return out;
}

std::vector<cplx> to_physical_complex(const SpectralField& g) {
  if (g.coeffs.size() != g.grid.size()) throw ConfigError("coefficient length does not match grid");
  std::vector<cplx> buf(g.coeffs);
  fft::inverse(buf, buf);
  return buf;
}

PhysicalField to_physical(const SpectralField& g) {
  auto buf = to_physical_complex(g);
  PhysicalField out = PhysicalField::zeros(g.grid);
  for (std::size_t j = 0; j < buf.size(); ++j) out.values[j] = buf[j].real();
  return out;
}

SpectralField derivative(const SpectralField& g, int order) {
  if (order < 1 || order > 2) throw ConfigError("derivative order must be 1 or 2");
  SpectralField out = g;
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    const double xi = g.grid.wavenumber(i);
    if (order == 1) {
      out.coeffs[i] *= g.grid.is_nyquist(i) ? cplx{} : cplx{0.0, xi};
    } else {
      out.coeffs[i] *= -xi * xi;
    }
  }
  return out;
}

SpectralField hilbert(const SpectralField& g) {
  SpectralField out = g;
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    const long m = g.grid.mode(i);
    if (m == 0 || g.grid.is_nyquist(i)) {
      out.coeffs[i] = 0.0;
    } else {
      out.coeffs[i] *= cplx{0.0, m > 0 ? -1.0 : 1.0};
    }
  }
  return out;
}

double l2_norm(const PhysicalField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s * f.grid.dx());
}

double l2_norm(const SpectralField& g) {
  double s = 0.0;
  for (const auto& c : g.coeffs) s += std::norm(c);
  return std::sqrt(s * g.grid.dx() / static_cast<double>(g.grid.size()));
}

double l2_norm_frequency(const SpectralField& g) {
  double s = 0.0;
  for (const auto& c : g.coeffs) s += std::norm(c);
  const double dx = g.grid.dx();
  return std::sqrt(s * dx * dx * g.grid.dxi());
}

double mean(const PhysicalField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s / static_cast<double>(f.values.size());
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

SpectralField operator*(cplx c, const SpectralField& a) {
  SpectralField out = a;
  for (auto& v : out.coeffs) v *= c;
  return out;
}

PhysicalField operator-(const PhysicalField& a, const PhysicalField& b) {
  require_same_grid(a.grid, b.grid);
  PhysicalField out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

SpectralField restrict_to(const SpectralField& fine, const Grid& coarse) {
  if (fine.grid.half_length() != coarse.half_length() || fine.grid.size() < coarse.size())
    throw ConfigError("restriction requires equal L and a finer source grid");
  SpectralField out = SpectralField::zeros(coarse);
  const double scale = static_cast<double>(coarse.size()) / static_cast<double>(fine.grid.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (coarse.is_nyquist(i)) continue;
    out.coeffs[i] = scale * fine.at_mode(coarse.mode(i));
  }
  return out;
}

}  // namespace bob
