#pragma once

// Littlewood-Paley symbols on the frequency line.
//
// eta0 is even, equal to 1 on [-5/4, 5/4] and 0 outside [-8/5, 8/5]; on the
// transition band it is the C-infinity step s(t) = q(t) / (q(t) + q(1 - t)),
// q(t) = exp(-1/t). Homogeneous blocks chi_l(xi) = eta0(xi / 2^l) -
// eta0(xi / 2^(l-1)) vanish exactly outside (5/8) 2^l <= |xi| <= (8/5) 2^l.
// Inhomogeneous blocks: eta_0 = eta0, eta_l = chi_l for l >= 1, 0 for l < 0.

#include <cmath>

namespace bob::dyadic {

double smooth_step(double t);
double eta0(double xi);
double chi(int l, double xi);
double eta(int k, double xi);
// sum_{l <= k} eta_l = eta0(xi / 2^k) for k >= 0.
double eta_leq(int k, double xi);
double eta_range(int k1, int k2, double xi);
double chi_range(int l1, int l2, double xi);

// Lowest resolvable homogeneous index for a frequency spacing d:
// ceil(log2(d)) - 1.
int homogeneous_floor(double spacing);

// Homogeneous block l within the truncated range [floor, top]: the bottom block
// absorbs everything below it (eta0(xi / 2^floor)), so the family sums to
// eta0(xi / 2^top) exactly.
double chi_truncated(int l, int floor, double xi);

// Inhomogeneous block j within [0, top]: the top block absorbs everything
// above it (1 - eta0(xi / 2^(top-1))), so the family sums to 1 exactly.
double eta_capped(int j, int top, double xi);

struct DyadicSymbol {
  enum class Kind { eta0, chi, eta, eta_range, eta_leq, chi_range };
  Kind kind = Kind::eta0;
  int lo = 0;
  int hi = 0;

  double operator()(double xi) const;

  static DyadicSymbol make_eta0() { return {Kind::eta0, 0, 0}; }
  static DyadicSymbol make_chi(int l) { return {Kind::chi, l, l}; }
  static DyadicSymbol make_eta(int k) { return {Kind::eta, k, k}; }
  static DyadicSymbol make_eta_range(int k1, int k2) { return {Kind::eta_range, k1, k2}; }
  static DyadicSymbol make_eta_leq(int k) { return {Kind::eta_leq, k, k}; }
  static DyadicSymbol make_chi_range(int l1, int l2) { return {Kind::chi_range, l1, l2}; }
};

// I_l = {|xi| in [2^(l-1), 2^(l+1)]}; I~_0 = [-2, 2], I~_j = I_j for j >= 1.
bool in_band(int l, double xi);
bool in_modulation_band(int j, double mu);

inline double omega(double xi) { return -xi * std::abs(xi); }

// D_{k,j}: frequency in I_k and modulation (tau - omega(xi) for k >= 1, tau for
// k <= 0) in I~_j.
struct DyadicRegion {
  int k = 0;
  int j = 0;
  bool contains(double xi, double tau) const;
};

}  // namespace bob::dyadic
