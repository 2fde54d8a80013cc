#include "bob/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bob/errors.hpp"
#include "bob/fft.hpp"

namespace bob::kernels {
namespace {

void fft2(std::vector<cplx>& a, std::size_t rows, std::size_t cols, bool forward) {
  if (forward) {
    fft::forward_many(a.data(), cols, rows, 1, cols);
    fft::forward_many(a.data(), rows, cols, cols, 1);
  } else {
    fft::inverse_many(a.data(), rows, cols, cols, 1);
    fft::inverse_many(a.data(), cols, rows, 1, cols);
  }
}

double l1_over_rows(const std::vector<double>& row_energy, double dx, double dt) {
  double s = 0.0;
  for (double e : row_energy) s += std::sqrt(e * dt);
  return s * dx;
}

}  // namespace

std::vector<double> block_energy_serial(const SpaceTimeSpectral& f, int n_blocks,
                                        const BlockMap& blocks) {
  std::vector<double> e(static_cast<std::size_t>(n_blocks), 0.0);
  CellBlocks cb;
  for (std::size_t i = 0; i < f.n_space(); ++i) {
    const double xi = f.grid.wavenumber(i);
    for (std::size_t n = 0; n < f.n_time(); ++n) {
      const double a = std::norm(f.at(i, n));
      if (a == 0.0) continue;
      cb.count = 0;
      blocks(xi, f.time.tau(n), cb);
      for (int b = 0; b < cb.count; ++b) {
        const auto [id, w] = cb.items[b];
        e[static_cast<std::size_t>(id)] += w * w * a;
      }
    }
  }
  return e;
}

std::vector<double> block_energy_parallel(const SpaceTimeSpectral& f, int n_blocks,
                                          const BlockMap& blocks) {
  const std::size_t nb = static_cast<std::size_t>(n_blocks);
  const std::size_t rows = f.n_space();
  std::vector<double> partial(rows * nb, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < rows; ++i) {
    CellBlocks cb;
    const double xi = f.grid.wavenumber(i);
    double* row = partial.data() + i * nb;
    for (std::size_t n = 0; n < f.n_time(); ++n) {
      const double a = std::norm(f.at(i, n));
      if (a == 0.0) continue;
      cb.count = 0;
      blocks(xi, f.time.tau(n), cb);
      for (int b = 0; b < cb.count; ++b) {
        const auto [id, w] = cb.items[b];
        row[id] += w * w * a;
      }
    }
  }
  std::vector<double> e(nb, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t b = 0; b < nb; ++b) e[b] += partial[i * nb + b];
  return e;
}

double l1x_l2t_serial(const SpaceTimeSpectral& f, const Multiplier& m) {
  const std::size_t n = f.n_space();
  const std::size_t mt = f.n_time();
  std::vector<cplx> a(n * mt);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = f.grid.wavenumber(i);
    for (std::size_t k = 0; k < mt; ++k) a[i * mt + k] = m(xi, f.time.tau(k)) * f.at(i, k);
  }
  fft2(a, n, mt, false);
  std::vector<double> energy(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < mt; ++k) energy[j] += std::norm(a[j * mt + k]);
  return l1_over_rows(energy, f.grid.dx(), f.time.dt());
}

double l1x_l2t_parallel(const SpaceTimeSpectral& f, const Multiplier& m) {
  const std::size_t n = f.n_space();
  const std::size_t mt = f.n_time();
  std::vector<double> col_energy(mt * n, 0.0);
  const auto xi = f.grid.wavenumbers();
#pragma omp parallel
  {
    std::vector<cplx> col(n);
#pragma omp for schedule(static)
    for (std::size_t k = 0; k < mt; ++k) {
      const double tau = f.time.tau(k);
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx c = f.at(i, k);
        col[i] = c == cplx{} ? cplx{} : m(xi[i], tau) * c;
        any = any || col[i] != cplx{};
      }
      if (!any) continue;
      fft::inverse(col, col);
      for (std::size_t j = 0; j < n; ++j) col_energy[k * n + j] = std::norm(col[j]);
    }
  }
  // Parseval in t: sum_n |v_{jn}|^2 = (1/M) sum_k |g_j(tau_k)|^2.
  std::vector<double> energy(n, 0.0);
  for (std::size_t k = 0; k < mt; ++k)
    for (std::size_t j = 0; j < n; ++j) energy[j] += col_energy[k * n + j];
  for (auto& e : energy) e /= static_cast<double>(mt);
  return l1_over_rows(energy, f.grid.dx(), f.time.dt());
}

std::vector<double> duhamel_weights(std::size_t i) {
  std::vector<double> w(i + 1, 0.0);
  if (i == 0) return w;
  if (i == 1) return {0.5, 0.5};
  auto simpson = [&w](std::size_t a, std::size_t b) {
    for (std::size_t l = a; l < b; l += 2) {
      w[l] += 1.0 / 3.0;
      w[l + 1] += 4.0 / 3.0;
      w[l + 2] += 1.0 / 3.0;
    }
  };
  if (i % 2 == 0) {
    simpson(0, i);
  } else {
    w[0] += 3.0 / 8.0;
    w[1] += 9.0 / 8.0;
    w[2] += 9.0 / 8.0;
    w[3] += 3.0 / 8.0;
    simpson(3, i);
  }
  return w;
}

namespace {

std::vector<std::vector<cplx>> propagators(const std::vector<cplx>& lambda, double h,
                                           std::size_t steps) {
  std::vector<std::vector<cplx>> e(steps + 1, std::vector<cplx>(lambda.size()));
  for (std::size_t d = 0; d <= steps; ++d)
    for (std::size_t m = 0; m < lambda.size(); ++m)
      e[d][m] = std::exp(lambda[m] * (h * static_cast<double>(d)));
  return e;
}

void duhamel_node(const Slices& slices, const std::vector<std::vector<cplx>>& e, double h,
                  std::size_t i, std::vector<cplx>& out) {
  std::fill(out.begin(), out.end(), cplx{});
  const auto w = duhamel_weights(i);
  for (std::size_t l = 0; l <= i; ++l) {
    if (w[l] == 0.0) continue;
    const auto& el = e[i - l];
    const auto& s = slices[l];
    const double wl = w[l] * h;
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += wl * el[m] * s[m];
  }
}

}  // namespace

Slices duhamel_serial(const Slices& slices, const std::vector<cplx>& lambda, double h) {
  const std::size_t count = slices.size();
  Slices out(count, std::vector<cplx>(lambda.size()));
  if (count == 0) return out;
  const auto e = propagators(lambda, h, count - 1);
  for (std::size_t i = 1; i < count; ++i) duhamel_node(slices, e, h, i, out[i]);
  return out;
}

Slices duhamel_parallel(const Slices& slices, const std::vector<cplx>& lambda, double h) {
  const std::size_t count = slices.size();
  Slices out(count, std::vector<cplx>(lambda.size()));
  if (count == 0) return out;
  const auto e = propagators(lambda, h, count - 1);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 1; i < count; ++i) duhamel_node(slices, e, h, i, out[i]);
  return out;
}

namespace {

std::pair<std::size_t, std::size_t> active_range(const OscillatoryProblem& p, double tau) {
  if (!p.active) return {0, p.xi.size()};
  auto r = p.active(tau);
  r.second = std::min(r.second, p.xi.size());
  return r;
}

}  // namespace

std::vector<double> kernel_sup_serial(const OscillatoryProblem& p) {
  std::vector<double> sup(p.x.size(), 0.0);
  const double c = p.dxi / (2.0 * std::numbers::pi);
  for (double tau : p.tau) {
    const auto [a, b] = active_range(p, tau);
    for (std::size_t q = 0; q < p.x.size(); ++q) {
      cplx k{};
      for (std::size_t r = a; r < b; ++r)
        k += p.symbol(p.xi[r], tau) * std::polar(1.0, p.x[q] * p.xi[r]);
      sup[q] = std::max(sup[q], std::abs(k) * c);
    }
  }
  return sup;
}

std::vector<double> kernel_sup_parallel(const OscillatoryProblem& p) {
  const std::size_t nx = p.x.size();
  const std::size_t nt = p.tau.size();
  const double c = p.dxi / (2.0 * std::numbers::pi);
  std::vector<double> table(nt * nx, 0.0);
#pragma omp parallel
  {
    std::vector<cplx> s;
#pragma omp for schedule(dynamic)
    for (std::size_t t = 0; t < nt; ++t) {
      const double tau = p.tau[t];
      const auto [a, b] = active_range(p, tau);
      if (a >= b) continue;
      s.resize(b - a);
      for (std::size_t r = a; r < b; ++r) s[r - a] = p.symbol(p.xi[r], tau);
      for (std::size_t q = 0; q < nx; ++q) {
        // Uniform xi spacing: advance the phase by a fixed rotation.
        const cplx step = std::polar(1.0, p.x[q] * p.dxi);
        cplx z = std::polar(1.0, p.x[q] * p.xi[a]);
        cplx k{};
        for (std::size_t r = 0; r < s.size(); ++r) {
          k += s[r] * z;
          z *= step;
          if ((r & 255) == 255 && r + 1 < s.size()) z = std::polar(1.0, p.x[q] * p.xi[a + r + 1]);
        }
        table[t * nx + q] = std::abs(k) * c;
      }
    }
  }
  std::vector<double> sup(nx, 0.0);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t q = 0; q < nx; ++q) sup[q] = std::max(sup[q], table[t * nx + q]);
  return sup;
}

namespace {

void require_same_layout(const SpaceTimeSpectral& a, const SpaceTimeSpectral& b) {
  require_same_grid(a.grid, b.grid);
  if (!(a.time == b.time)) throw ConfigError("time axis mismatch");
}

long signed_index(std::size_t i, std::size_t n) {
  const auto k = static_cast<long>(i);
  const auto nn = static_cast<long>(n);
  return k < nn / 2 ? k : k - nn;
}

std::size_t wrap(long s, std::size_t n) {
  const auto nn = static_cast<long>(n);
  return static_cast<std::size_t>(((s % nn) + nn) % nn);
}

}  // namespace

SpaceTimeSpectral convolve_serial(const SpaceTimeSpectral& f1, const SpaceTimeSpectral& f2) {
  require_same_layout(f1, f2);
  const std::size_t n = f1.n_space();
  const std::size_t mt = f1.n_time();
  const long hn = static_cast<long>(n / 2);
  const long hm = static_cast<long>(mt / 2);
  SpaceTimeSpectral out = SpaceTimeSpectral::zeros(f1.grid, f1.time);
  const double scale = f1.continuum_scale() * f1.cell_measure();
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    const long p1 = signed_index(i1, n);
    for (std::size_t n1 = 0; n1 < mt; ++n1) {
      const cplx a = f1.at(i1, n1);
      if (a == cplx{}) continue;
      const long q1 = signed_index(n1, mt);
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        const long p = p1 + signed_index(i2, n);
        if (p < -hn || p >= hn) continue;
        for (std::size_t n2 = 0; n2 < mt; ++n2) {
          const long q = q1 + signed_index(n2, mt);
          if (q < -hm || q >= hm) continue;
          out.at(wrap(p, n), wrap(q, mt)) += a * f2.at(i2, n2);
        }
      }
    }
  }
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

SpaceTimeSpectral convolve_parallel(const SpaceTimeSpectral& f1, const SpaceTimeSpectral& f2) {
  require_same_layout(f1, f2);
  const std::size_t n = f1.n_space();
  const std::size_t mt = f1.n_time();
  const std::size_t pn = 2 * n;
  const std::size_t pm = 2 * mt;
  // Zero padding to twice the size turns the circular product into a linear one.
  auto pad = [&](const SpaceTimeSpectral& f) {
    std::vector<cplx> a(pn * pm);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < mt; ++k)
        a[wrap(signed_index(i, n), pn) * pm + wrap(signed_index(k, mt), pm)] = f.at(i, k);
    fft2(a, pn, pm, false);
    return a;
  };
  std::vector<cplx> a = pad(f1);
  const std::vector<cplx> b = pad(f2);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  fft2(a, pn, pm, true);
  const double scale = f1.continuum_scale() * f1.cell_measure() * static_cast<double>(pn * pm);
  SpaceTimeSpectral out = SpaceTimeSpectral::zeros(f1.grid, f1.time);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < mt; ++k)
      out.at(i, k) = scale * a[wrap(signed_index(i, n), pn) * pm + wrap(signed_index(k, mt), pm)];
  return out;
}

}  // namespace bob::kernels
