#pragma once

// Periodic truncation of the real line to [-L, L) with N equispaced nodes.
//
// Conventions used by every norm in this library:
//   * DFT coefficients c_m are unnormalized (forward sums, inverse divides by N)
//     and stored in FFT order: index i holds mode m = i for i < N/2, m = i - N
//     otherwise, with wavenumber xi_m = pi m / L.
//   * The continuum transform phi_hat(xi) = int phi(x) exp(-i x xi) dx is
//     approximated by dx * c_m (a unimodular phase from the origin shift is
//     dropped; all norms are translation invariant).
//   * L^2 norms on the frequency side use the measure d(xi) = pi / L, so
//     ||phi_hat||_{L^2_xi}^2 = 2 pi ||phi||_{L^2_x}^2 (Plancherel).
//   * The inverse transform carries the 1/(2 pi); with the scaling above it
//     maps dx * c back to the nodal values exactly.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bob {

using cplx = std::complex<double>;

class Grid {
 public:
  // Throws ConfigError unless N is a power of two >= 16 and L > 0.
  static Grid make(double half_length, std::size_t n_points);

  double half_length() const { return half_length_; }
  std::size_t size() const { return n_; }
  double dx() const { return 2.0 * half_length_ / static_cast<double>(n_); }
  double dxi() const;
  double x(std::size_t j) const { return -half_length_ + static_cast<double>(j) * dx(); }

  // Signed mode number of FFT-order index i.
  long mode(std::size_t i) const {
    const auto n = static_cast<long>(n_);
    const auto k = static_cast<long>(i);
    return k < n / 2 ? k : k - n;
  }
  std::size_t index_of_mode(long m) const;
  double wavenumber(std::size_t i) const;
  double max_wavenumber() const;
  bool is_nyquist(std::size_t i) const { return i == n_ / 2; }

  // Wavenumbers in FFT order.
  std::vector<double> wavenumbers() const;
  // Wavenumbers sorted ascending, m = -N/2 .. N/2-1.
  std::vector<double> sorted_wavenumbers() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Grid(double half_length, std::size_t n) : half_length_(half_length), n_(n) {}
  double half_length_ = 1.0;
  std::size_t n_ = 16;
};

struct PhysicalField {
  Grid grid;
  std::vector<double> values;

  static PhysicalField zeros(const Grid& g) { return {g, std::vector<double>(g.size(), 0.0)}; }
  template <class F>
  static PhysicalField sample(const Grid& g, F&& f) {
    PhysicalField out = zeros(g);
    for (std::size_t j = 0; j < g.size(); ++j) out.values[j] = f(g.x(j));
    return out;
  }
  bool is_finite() const;
};

struct SpectralField {
  Grid grid;
  std::vector<cplx> coeffs;  // FFT order

  static SpectralField zeros(const Grid& g) { return {g, std::vector<cplx>(g.size())}; }
  cplx at_mode(long m) const { return coeffs[grid.index_of_mode(m)]; }
  cplx& at_mode(long m) { return coeffs[grid.index_of_mode(m)]; }
};

SpectralField to_spectral(const PhysicalField& f);
// Real part of the inverse transform; the caller keeps Hermitian symmetry.
PhysicalField to_physical(const SpectralField& g);
// Complex inverse transform without discarding the imaginary part.
std::vector<cplx> to_physical_complex(const SpectralField& g);

// (i xi)^order multiplier; the Nyquist mode is zeroed for odd orders.
SpectralField derivative(const SpectralField& g, int order);
// Fourier multiplier -i sgn(xi), sgn(0) = 0, Nyquist zeroed.
SpectralField hilbert(const SpectralField& g);

// ||f||_{L^2_x} = sqrt(sum |f_j|^2 dx).
double l2_norm(const PhysicalField& f);
// Same quantity from the coefficients: sqrt((dx / N) sum |c_m|^2).
double l2_norm(const SpectralField& g);
// ||f_hat||_{L^2_xi} with the conventions above.
double l2_norm_frequency(const SpectralField& g);
double mean(const PhysicalField& f);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cplx c, const SpectralField& a);
PhysicalField operator-(const PhysicalField& a, const PhysicalField& b);

// Keep modes of a fine grid that exist on a coarse grid with the same L
// (coefficients rescaled by N_coarse / N_fine). Throws ConfigError otherwise.
SpectralField restrict_to(const SpectralField& fine, const Grid& coarse);

// Throws ConfigError if the grids differ.
void require_same_grid(const Grid& a, const Grid& b);

}  // namespace bob
