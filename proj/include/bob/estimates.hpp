#pragma once

// Empirical ratio tracking for the epsilon-uniform linear estimates, the
// multiplier kernel bound and the bilinear estimates. Every ratio is a
// quotient of reported norms; infimum-type norms enter as upper bounds, so the
// studies track ratios rather than verify inequalities.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bob/grid.hpp"
#include "bob/spacetime.hpp"

namespace bob {

struct RatioSample {
  std::string estimate_id;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double sigma = 0.0;
  double ratio = 0.0;
  double param = 0.0;  // study-specific label (j1 for dyadic bilinear, k for kernels)
};

struct RatioSummary {
  double sigma = 0.0;
  double max = 0.0;
  double median = 0.0;
  // max over epsilon of the per-epsilon maximum ratio divided by its minimum.
  double spread = 1.0;
  // Slope of log(per-epsilon max ratio) against log(epsilon); 0 for fewer
  // than two positive epsilons.
  double slope = 0.0;
};

struct RatioStudy {
  std::string estimate_id;
  std::vector<double> epsilons;  // descending
  std::vector<RatioSample> samples;
  std::vector<std::string> notices;

  // One summary per sigma present in the samples, ascending sigma.
  std::vector<RatioSummary> summarize() const;
  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
  // Spearman correlation of ratio against param over all samples.
  double rank_correlation() const;
};

// Space-time window [-T/2, T/2) with M samples on a spatial grid.
struct LabGrid {
  double half_length = 8.0;
  std::size_t n_points = 64;
  double window = 4.0;
  std::size_t n_time = 1024;

  Grid grid() const;
  TimeAxis time() const;
};

using DataFamily = std::function<PhysicalField(const Grid&, std::uint64_t seed)>;

// Gaussian envelope times a few random Fourier modes below `max_frequency`.
DataFamily random_smooth_family(double max_frequency = 5.0);

// Low-pass Gaussians a e^{-(x-c)^2/w^2}, w uniform in [w_min, w_max], |c| <= shift, a = 1.
DataFamily gaussian_family(double w_min = 1.0, double w_max = 4.0, double shift = 2.0);

struct StudyConfig {
  LabGrid lab;
  std::vector<double> epsilons{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> sigmas{0.0};
  int samples = 20;
  std::uint64_t seed = 1;
  int k_y = 5;
  int workers = 0;  // 0: OpenMP default
};

// psi(t) exp(i t omega - |t| eps xi^2) phi over the window, psi = eta0(t).
SpaceTimeField windowed_free_solution(const PhysicalField& phi, double epsilon,
                                      const TimeAxis& time);

// ||psi W_eps(t) phi||_{F^sigma} / ||phi||_{H~^sigma}.
RatioStudy free_estimate_study(const StudyConfig& cfg, const DataFamily& family);

// Forcing u(t) = b(t) M W_0(t) phi with a smooth bump b on [0, 1.5] and a
// modulation shift M = exp(i t mu0 sgn(xi)); zero for t < 0.
SpaceTimeField forcing_sample(const PhysicalField& phi, double shift, const TimeAxis& time);
// psi(t) int_0^t W_eps(t - s) u(s) ds on the window (zero for t <= 0).
SpaceTimeField windowed_duhamel(const SpaceTimeField& u, double epsilon);
// ||psi int W u||_{F^sigma} / ||u||_{N^sigma}.
RatioStudy inhomogeneous_estimate_study(const StudyConfig& cfg, const DataFamily& family);

struct KernelConfig {
  double half_length = 32.0;  // x in [-L, L)
  std::size_t n_points = 512;
  int tau_samples = 48;       // per sign
  int refine = 16;            // initial xi refinement over pi / L
  double tolerance = 0.005;   // relative change accepting a refinement level
  int max_doublings = 4;
  int low_j = 0;              // tau block for the k = 0 variant
};

// sum_x dx sup_tau |K(x, tau)| for the multiplier
//   mu / (mu - i eps xi^2) eta_{<=k}(mu) chi_{[k-1,k+1]}(xi), mu = tau - omega(xi)   (k >= 1),
//   mu / (mu - i eps xi^2) chi_j(tau) eta_{[0,1]}(xi)                               (k = 0).
// ResolutionError if the xi step cannot resolve the phase or refinement stalls.
double multiplier_kernel_value(int k, double epsilon, const KernelConfig& cfg = {});
RatioStudy multiplier_kernel_study(int k, const std::vector<double>& epsilons,
                                   const KernelConfig& cfg = {});

// Closed form of |F^{-1}_xi [-i eps tau / (tau + xi^2 - i eps xi^2)]|(x).
double dissipative_kernel(double x, double tau, double epsilon);
// Worst value of |kernel| / (C eps 2^k exp(-c eps 2^k |x|)) over x on the
// kernel grid, tau with |tau| in [0.1, 10.24] 4^k, and the given epsilons.
double dissipative_envelope_excess(int k, const std::vector<double>& epsilons, double c_amp,
                                   double c_rate, const KernelConfig& cfg = {});

struct BilinearRegime {
  int k = 2;
  int k1 = 2;
  int k2 = 2;
  int j_max = 6;  // modulation indices j1, j2 drawn from [0, j_max]
};

struct BilinearConfig {
  LabGrid lab{8.0, 128, 8.0, 1024};
  int samples = 100;
  std::uint64_t seed = 1;
  int k_y = 5;
  int workers = 0;
};

// Random data eta_k(xi) eta_j(modulation) times complex Gaussian noise.
SpaceTimeSpectral dyadic_block_sample(const Grid& g, const TimeAxis& t, int k, int j,
                                      std::uint64_t seed);
// 2^k ||eta_k A_k^{-1} (f1 * f2)||_{Z_k} and ||f1||_{Z_k1} ||f2||_{Z_k2}.
struct BilinearSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
BilinearSides bilinear_sides(const SpaceTimeSpectral& f1, const SpaceTimeSpectral& f2,
                             const BilinearRegime& r, int k_y);
RatioStudy bilinear_dyadic_study(const BilinearRegime& r, const BilinearConfig& cfg);

// ||d_x(u v)||_{N^sigma} / (||u||_{F^sigma} ||v||_{F^0} + ||u||_{F^0} ||v||_{F^sigma})
// with u, v windowed free BO waves of random band-limited data.
RatioStudy full_bilinear_study(const std::vector<double>& sigmas, const BilinearConfig& cfg);

}  // namespace bob
