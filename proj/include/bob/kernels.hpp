#pragma once

// Hot loops with an OpenMP implementation and a straightforward serial
// reference. The parallel versions write disjoint outputs and reduce partial
// sums serially in a fixed order, so results do not depend on thread count.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "bob/spacetime.hpp"

namespace bob::kernels {

// Up to four (block, weight) pairs touched by a spectral cell.
struct CellBlocks {
  std::array<std::pair<int, double>, 4> items{};
  int count = 0;
  void add(int block, double weight) {
    if (weight != 0.0) items[count++] = {block, weight};
  }
};
using BlockMap = std::function<void(double xi, double tau, CellBlocks& out)>;

// E_b = sum over cells of |w_b(xi, tau) c|^2 (raw coefficient units).
std::vector<double> block_energy_serial(const SpaceTimeSpectral& f, int n_blocks,
                                        const BlockMap& blocks);
std::vector<double> block_energy_parallel(const SpaceTimeSpectral& f, int n_blocks,
                                          const BlockMap& blocks);

// || F^{-1}[m f] ||_{L^1_x L^2_t} with the continuum scaling of SpaceTimeSpectral.
using Multiplier = std::function<cplx(double xi, double tau)>;
double l1x_l2t_serial(const SpaceTimeSpectral& f, const Multiplier& m);
double l1x_l2t_parallel(const SpaceTimeSpectral& f, const Multiplier& m);

// D_i = sum_l w_{il} exp(lambda (t_i - t_l)) s_l on a uniform grid t_l = l h,
// where w_{il} integrates over [0, t_i]: trapezoid for i = 1, composite Simpson
// for even i, Simpson 3/8 on the first three intervals plus Simpson for odd
// i >= 3. slices[l] holds coefficients; lambda is the per-mode symbol.
using Slices = std::vector<std::vector<cplx>>;
Slices duhamel_serial(const Slices& slices, const std::vector<cplx>& lambda, double h);
Slices duhamel_parallel(const Slices& slices, const std::vector<cplx>& lambda, double h);
// Quadrature weights w_{i,0..i} of the rule above (without the factor h).
std::vector<double> duhamel_weights(std::size_t i);

// sup_q |K(x_p, tau_q)| with K(x, tau) = (1/2pi) sum_r e^{i x xi_r} m(xi_r, tau) dxi.
// `active` may restrict each tau to a sub-range [first, last) of xi indices.
struct OscillatoryProblem {
  std::vector<double> x;
  std::vector<double> xi;
  double dxi = 0.0;
  std::vector<double> tau;
  std::function<cplx(double xi, double tau)> symbol;
  std::function<std::pair<std::size_t, std::size_t>(double tau)> active;
};
std::vector<double> kernel_sup_serial(const OscillatoryProblem& p);
std::vector<double> kernel_sup_parallel(const OscillatoryProblem& p);

// Linear convolution (f1 * f2)(xi, tau) = int f1(xi1, tau1) f2(xi - xi1, tau - tau1)
// on the grid of the inputs, using continuum values and the cell measure;
// the output is cropped to the input window (no periodic wrap).
SpaceTimeSpectral convolve_serial(const SpaceTimeSpectral& f1, const SpaceTimeSpectral& f2);
SpaceTimeSpectral convolve_parallel(const SpaceTimeSpectral& f1, const SpaceTimeSpectral& f2);

}  // namespace bob::kernels
