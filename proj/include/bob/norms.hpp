#pragma once

// Norms of single-time data (H^sigma, B0, refined H~^sigma) and of space-time
// spectra (X_k, Y_k, Y_0, Z_k, Z-bar_0, F^sigma, N^sigma).
//
// All values use the continuum scalings documented in grid.hpp and
// spacetime.hpp. Infimum-type norms (B0, Z_k as a sum space) are reported as
// the cost of an explicit decomposition, i.e. an upper bound on the infimum.
//
// Truncations forced by the grids:
//   * homogeneous xi blocks run over [floor, 1] with floor from pi / L, the
//     bottom block absorbing all lower frequencies;
//   * modulation blocks run over [0, j_max] with j_max = floor(log2(M pi / T)),
//     the top block absorbing everything above it;
//   * homogeneous tau blocks (Y_0) stop at the floor set by 2 pi / T.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bob/grid.hpp"
#include "bob/spacetime.hpp"

namespace bob {

struct BlockContribution {
  std::string block_id;
  double weight = 0.0;
  double contribution = 0.0;  // weight times the block's own norm
};

struct NormBreakdown {
  double total = 0.0;
  std::vector<BlockContribution> blocks;
  // B0: the L^1 part g of f = g + h (h = f - g).
  std::optional<SpectralField> split_g;
  // Z_k: the Y part of f = f_X + f_Y, and the modulation threshold used
  // (-1 for an externally supplied candidate).
  std::optional<SpaceTimeSpectral> split_y;
  int threshold = 0;
};

void write_csv(std::ostream& os, const NormBreakdown& b);

inline double beta_weight(int k, int j) { return 1.0 + std::exp2(0.5 * (j - 2 * k)); }

// (int (1 + xi^2)^sigma |phi_hat|^2 dxi)^{1/2}.
double sobolev_norm(const SpectralField& phi_hat, double sigma);

struct B0Options {
  int max_iterations = 500;
  double tolerance = 1e-6;  // relative improvement between checkpoints
  int checkpoint = 50;
  // Extra initial splits g; the solver starts from the cheapest candidate.
  std::vector<SpectralField> initial_g;
};

// Modes with |xi| <= 2 are the optimisation variables; f must vanish
// elsewhere (DomainError otherwise).
NormBreakdown b0_norm(const SpectralField& f, const B0Options& opt = {});
// Cost ||F^{-1} g||_{L^1} + sum_{k'} 2^{-k'/2} ||chi_{k'} (f - g)||_{L^2} of a split.
double b0_split_cost(const SpectralField& f, const SpectralField& g);
// Homogeneous block range [floor, 1] used by B0 and X_0.
int xi_floor(const Grid& g);

NormBreakdown refined_sobolev_norm(const SpectralField& phi_hat, double sigma,
                                   const B0Options& opt = {});
// Largest k >= 1 whose block eta_k meets the grid frequencies.
int top_frequency_block(const Grid& g);

NormBreakdown xk_norm(const SpaceTimeSpectral& f, int k);
double yk_norm(const SpaceTimeSpectral& f, int k);
double y0_norm(const SpaceTimeSpectral& f);
double zbar0_norm(const SpaceTimeSpectral& f);

struct ZOptions {
  // Y_k is part of Z_k for k >= k_y (and always for k = 0).
  int k_y = 5;
  // Extra Y-part candidates evaluated alongside the threshold family.
  std::vector<SpaceTimeSpectral> extra_y;
};
NormBreakdown zk_norm(const SpaceTimeSpectral& f, int k, const ZOptions& opt = {});

// F^sigma: (1 + t^2) u, transformed, split by eta_k(xi), l^2 sum of 2^{sigma k} Z_k.
NormBreakdown fsigma_norm(const SpaceTimeField& u, double sigma, const ZOptions& opt = {});
// N^sigma: eta_k(xi) A_k^{-1} F(u) in Z_k, A_k = tau - omega(xi) + i (k >= 1), tau + i (k = 0).
NormBreakdown nsigma_norm(const SpaceTimeField& u, double sigma, const ZOptions& opt = {});
// The same on an already transformed field (F^sigma expects F((1 + t^2) u)).
NormBreakdown fsigma_norm_spectral(const SpaceTimeSpectral& f, double sigma,
                                   const ZOptions& opt = {});
NormBreakdown nsigma_norm_spectral(const SpaceTimeSpectral& f, double sigma,
                                   const ZOptions& opt = {});

}  // namespace bob
