#include "bob/dyadic.hpp"

namespace bob::dyadic {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double eta0(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.25) return 1.0;
  if (a >= 1.6) return 0.0;
  return smooth_step((1.6 - a) / (1.6 - 1.25));
}

double chi(int l, double xi) { return eta0(std::ldexp(xi, -l)) - eta0(std::ldexp(xi, 1 - l)); }

double eta(int k, double xi) {
  if (k < 0) return 0.0;
  if (k == 0) return eta0(xi);
  return chi(k, xi);
}

double eta_leq(int k, double xi) { return k < 0 ? 0.0 : eta0(std::ldexp(xi, -k)); }

double eta_range(int k1, int k2, double xi) {
  if (k2 < k1) return 0.0;
  return eta_leq(k2, xi) - eta_leq(k1 - 1, xi);
}

double chi_range(int l1, int l2, double xi) {
  if (l2 < l1) return 0.0;
  return eta0(std::ldexp(xi, -l2)) - eta0(std::ldexp(xi, 1 - l1));
}

int homogeneous_floor(double spacing) {
  return static_cast<int>(std::ceil(std::log2(spacing))) - 1;
}

double chi_truncated(int l, int floor, double xi) {
  if (l < floor) return 0.0;
  if (l == floor) return eta0(std::ldexp(xi, -l));
  return chi(l, xi);
}

double eta_capped(int j, int top, double xi) {
  if (j < 0 || j > top) return 0.0;
  if (j == top && top > 0) return 1.0 - eta0(std::ldexp(xi, 1 - top));
  if (j == top) return 1.0;
  return eta(j, xi);
}

double DyadicSymbol::operator()(double xi) const {
  switch (kind) {
    case Kind::eta0: return eta0(xi);
    case Kind::chi: return chi(lo, xi);
    case Kind::eta: return eta(lo, xi);
    case Kind::eta_range: return eta_range(lo, hi, xi);
    case Kind::eta_leq: return eta_leq(lo, xi);
    case Kind::chi_range: return chi_range(lo, hi, xi);
  }
  return 0.0;
}

bool in_band(int l, double xi) {
  const double a = std::abs(xi);
  return a >= std::ldexp(1.0, l - 1) && a <= std::ldexp(1.0, l + 1);
}

bool in_modulation_band(int j, double mu) {
  if (j == 0) return std::abs(mu) <= 2.0;
  return in_band(j, mu);
}

bool DyadicRegion::contains(double xi, double tau) const {
  if (!in_band(k, xi)) return false;
  const double mu = k >= 1 ? tau - omega(xi) : tau;
  return in_modulation_band(j, mu);
}

}  // namespace bob::dyadic
