#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bob/dyadic.hpp"
#include "bob/grid.hpp"
#include "bob/norms.hpp"

namespace oracle {

using bob::cplx;

// Random complex values on `count` distinct non-Nyquist modes with |xi| <= 2.
inline bob::SpectralField random_low_modes(const bob::Grid& g, std::mt19937_64& rng, std::size_t count,
                                           std::vector<long>* chosen = nullptr) {
  std::vector<long> all;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.wavenumber(i)) <= 2.0 && !g.is_nyquist(i)) all.push_back(g.mode(i));
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(count, all.size()));
  std::normal_distribution<double> nd;
  bob::SpectralField f = bob::SpectralField::zeros(g);
  for (long m : all) f.at_mode(m) = {nd(rng), nd(rng)};
  if (chosen) *chosen = all;
  return f;
}

// Per-mode split search: each active mode gives a fraction a/20 of its value to g.
// Coordinate descent over the 21-point grid from the all-h and all-g starts.
inline double b0_split_search(const bob::SpectralField& f, const std::vector<long>& modes) {
  double best = INFINITY;
  for (int start : {0, 20}) {
    std::vector<int> a(modes.size(), start);
    auto cost = [&] {
      bob::SpectralField g = bob::SpectralField::zeros(f.grid);
      for (std::size_t i = 0; i < modes.size(); ++i)
        g.at_mode(modes[i]) = (a[i] / 20.0) * f.at_mode(modes[i]);
      return bob::b0_split_cost(f, g);
    };
    double c = cost();
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < modes.size(); ++i) {
        int keep = a[i];
        for (int v = 0; v <= 20; ++v) {
          a[i] = v;
          const double cc = cost();
          if (cc < c - 1e-15) {
            c = cc;
            keep = v;
            changed = true;
          }
        }
        a[i] = keep;
      }
    }
    best = std::min(best, c);
  }
  return best;
}

// Smoothed B0 objective over complex g on every mode with |xi| <= 2, written
// from the definitions: sum_j dx |F^{-1} g|(x_j) + sum_l 2^{-l/2} ||chi_l (f - g)||_{L2}.
struct B0Problem {
  const bob::SpectralField* f = nullptr;
  std::vector<long> modes;
  std::vector<double> xi;
  std::vector<std::vector<double>> block;  // block[l][m] = chi weight * dx * sqrt(dxi)
  std::vector<double> weight;
  double mu = 1e-3;

  double eval(const double* v, double* grad) const {
    const bob::Grid& g = f->grid;
    const std::size_t n = g.size();
    const std::size_t s = modes.size();
    const double dx = g.dx();
    double total = 0.0;
    if (grad) std::fill(grad, grad + 2 * s, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = static_cast<double>(j) * dx;
      cplx u = 0.0;
      std::vector<cplx> e(s);
      for (std::size_t m = 0; m < s; ++m) {
        e[m] = std::polar(1.0 / static_cast<double>(n), xi[m] * x);
        u += cplx(v[2 * m], v[2 * m + 1]) * e[m];
      }
      const double r = std::sqrt(std::norm(u) + mu * mu);
      total += dx * r;
      if (grad)
        for (std::size_t m = 0; m < s; ++m) {
          grad[2 * m] += dx * (std::conj(u) * e[m]).real() / r;
          grad[2 * m + 1] += dx * (std::conj(u) * cplx(0, 1) * e[m]).real() / r;
        }
    }
    for (std::size_t l = 0; l < block.size(); ++l) {
      double q = 0.0;
      for (std::size_t m = 0; m < s; ++m) {
        const cplx h = f->at_mode(modes[m]) - cplx(v[2 * m], v[2 * m + 1]);
        q += block[l][m] * block[l][m] * std::norm(h);
      }
      const double r = std::sqrt(q + mu * mu);
      total += weight[l] * r;
      if (grad)
        for (std::size_t m = 0; m < s; ++m) {
          const cplx h = f->at_mode(modes[m]) - cplx(v[2 * m], v[2 * m + 1]);
          const double c = weight[l] * block[l][m] * block[l][m] / r;
          grad[2 * m] -= c * h.real();
          grad[2 * m + 1] -= c * h.imag();
        }
    }
    return total;
  }
};

inline double b0_f(const gsl_vector* v, void* p) {
  return static_cast<B0Problem*>(p)->eval(v->data, nullptr);
}
inline void b0_df(const gsl_vector* v, void* p, gsl_vector* g) {
  static_cast<B0Problem*>(p)->eval(v->data, g->data);
}
inline void b0_fdf(const gsl_vector* v, void* p, double* f, gsl_vector* g) {
  *f = static_cast<B0Problem*>(p)->eval(v->data, g->data);
}

// Quasi-Newton (GSL BFGS) on the smoothed objective with decreasing smoothing;
// returns the exact cost of the best split found.
inline double b0_quasi_newton(const bob::SpectralField& f) {
  const bob::Grid& g = f.grid;
  B0Problem p;
  p.f = &f;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.wavenumber(i)) <= 2.0 && !g.is_nyquist(i)) {
      p.modes.push_back(g.mode(i));
      p.xi.push_back(g.wavenumber(i));
    }
  const int floor = std::min(bob::dyadic::homogeneous_floor(g.dxi()), 1);
  for (int l = floor; l <= 1; ++l) {
    std::vector<double> w;
    for (double xi : p.xi)
      w.push_back(bob::dyadic::chi_truncated(l, floor, xi) * g.dx() * std::sqrt(g.dxi()));
    p.block.push_back(w);
    p.weight.push_back(std::exp2(-0.5 * l));
  }
  const std::size_t dim = 2 * p.modes.size();
  double scale = 0.0;
  for (long m : p.modes) scale = std::max(scale, std::abs(f.at_mode(m)));
  if (scale == 0.0) return 0.0;

  auto exact = [&](const double* v) {
    bob::SpectralField split = bob::SpectralField::zeros(g);
    for (std::size_t m = 0; m < p.modes.size(); ++m)
      split.at_mode(p.modes[m]) = cplx(v[2 * m], v[2 * m + 1]);
    return bob::b0_split_cost(f, split);
  };

  double best = INFINITY;
  for (double start : {1.0, 0.0, 0.5}) {
    gsl_vector* x = gsl_vector_alloc(dim);
    for (std::size_t m = 0; m < p.modes.size(); ++m) {
      const cplx c = start * f.at_mode(p.modes[m]);
      gsl_vector_set(x, 2 * m, c.real());
      gsl_vector_set(x, 2 * m + 1, c.imag());
    }
    for (double mu : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      p.mu = mu * scale * g.dx();
      gsl_multimin_function_fdf fn{&b0_f, &b0_df, &b0_fdf, dim, &p};
      gsl_multimin_fdfminimizer* s =
          gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, dim);
      gsl_multimin_fdfminimizer_set(s, &fn, x, 0.01 * scale, 0.1);
      for (int it = 0; it < 2000; ++it) {
        if (gsl_multimin_fdfminimizer_iterate(s)) break;
        if (gsl_multimin_test_gradient(s->gradient, 1e-10 * scale) == GSL_SUCCESS) break;
      }
      gsl_vector_memcpy(x, s->x);
      gsl_multimin_fdfminimizer_free(s);
    }
    best = std::min(best, exact(x->data));
    gsl_vector_free(x);
  }
  return best;
}

}  // namespace oracle
