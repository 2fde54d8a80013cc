#include "bob/norms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bob/dyadic.hpp"
#include "bob/errors.hpp"
#include "bob/fft.hpp"
#include "bob/kernels.hpp"

namespace bob {

namespace dy = dyadic;

void write_csv(std::ostream& os, const NormBreakdown& b) {
  os << "# schema=v1\n" << "block_id,weight,contribution\n";
  os << std::setprecision(17);
  for (const auto& c : b.blocks) os << c.block_id << ',' << c.weight << ',' << c.contribution << '\n';
  os << "total,1," << b.total << '\n';
}

double sobolev_norm(const SpectralField& phi_hat, double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("sobolev index must be nonnegative");
  const Grid& g = phi_hat.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.wavenumber(i);
    s += std::pow(1.0 + xi * xi, sigma) * std::norm(phi_hat.coeffs[i]);
  }
  return g.dx() * std::sqrt(s * g.dxi());
}

int xi_floor(const Grid& g) { return std::min(dy::homogeneous_floor(g.dxi()), 1); }

int top_frequency_block(const Grid& g) {
  int k = 1;
  while (0.625 * std::ldexp(1.0, k + 1) < g.max_wavenumber()) ++k;
  return k;
}

namespace {

std::string block_name(const char* prefix, int a) {
  std::ostringstream os;
  os << prefix << a;
  return os.str();
}

std::string block_name2(const char* p1, int a, const char* p2, int b) {
  std::ostringstream os;
  os << p1 << a << p2 << b;
  return os.str();
}

// Largest |coefficient| outside the predicate region relative to the overall
// maximum must stay below 1e-12.
template <class Field, class Pred>
void require_support(const Field& f, Pred&& inside, const char* what) {
  double peak = 0.0;
  double outside = 0.0;
  f.for_each([&](double a, bool in) {
    peak = std::max(peak, a);
    if (!in) outside = std::max(outside, a);
  }, inside);
  if (outside > 1e-12 * peak) throw DomainError(std::string("support violation: ") + what);
}

struct SpectralView {
  const SpectralField& f;
  template <class Visit, class Pred>
  void for_each(Visit&& visit, Pred&& inside) const {
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
      visit(std::abs(f.coeffs[i]), inside(f.grid.wavenumber(i)));
  }
};

struct SpaceTimeView {
  const SpaceTimeSpectral& f;
  template <class Visit, class Pred>
  void for_each(Visit&& visit, Pred&& inside) const {
    for (std::size_t i = 0; i < f.n_space(); ++i) {
      const double xi = f.grid.wavenumber(i);
      for (std::size_t n = 0; n < f.n_time(); ++n)
        visit(std::abs(f.at(i, n)), inside(xi, f.time.tau(n)));
    }
  }
};

// ---- B0 --------------------------------------------------------------------

struct B0Problem {
  std::size_t n = 0;
  std::vector<std::size_t> active;   // grid indices with |xi| <= 2
  std::vector<cplx> f;               // active coefficients (scaled)
  double dx = 0.0;
  int floor = 0;
  std::vector<std::vector<double>> b;  // b[k][a]: diagonal of B_{k'}

  std::vector<cplx> apply_a(const std::vector<cplx>& c) const {
    std::vector<cplx> full(n);
    for (std::size_t a = 0; a < active.size(); ++a) full[active[a]] = c[a];
    fft::inverse(full, full);
    for (auto& v : full) v *= dx;
    return full;
  }

  std::vector<cplx> apply_a_adjoint(std::vector<cplx> y) const {
    fft::forward(y, y);
    std::vector<cplx> out(active.size());
    const double s = dx / static_cast<double>(n);
    for (std::size_t a = 0; a < active.size(); ++a) out[a] = s * y[active[a]];
    return out;
  }

  double l1_cost(const std::vector<cplx>& g) const {
    double s = 0.0;
    for (const auto& v : apply_a(g)) s += std::abs(v);
    return s;
  }

  double block_cost(std::size_t k, const std::vector<cplx>& g) const {
    double s = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) s += std::norm(b[k][a] * (f[a] - g[a]));
    return std::sqrt(s);
  }

  double cost(const std::vector<cplx>& g) const {
    double c = l1_cost(g);
    for (std::size_t k = 0; k < b.size(); ++k) c += block_cost(k, g);
    return c;
  }
};

void project_unit_ball(std::vector<cplx>& z) {
  double s = 0.0;
  for (const auto& v : z) s += std::norm(v);
  const double r = std::sqrt(s);
  if (r > 1.0)
    for (auto& v : z) v /= r;
}

// Diagonally preconditioned primal-dual hybrid gradient iteration for
//   min_g ||A g||_1 + sum_k ||B_k (f - g)||_2.
std::vector<cplx> solve_b0(const B0Problem& p, std::vector<cplx> g, const B0Options& opt,
                           double& best_cost) {
  const std::size_t na = p.active.size();
  const std::size_t nk = p.b.size();
  std::vector<double> tau(na);
  for (std::size_t a = 0; a < na; ++a) {
    double col = p.dx;
    for (std::size_t k = 0; k < nk; ++k) col += p.b[k][a];
    tau[a] = 1.0 / col;
  }
  const double sigma_a = static_cast<double>(p.n) / (p.dx * static_cast<double>(na));
  std::vector<double> sigma_b(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    const double m = *std::max_element(p.b[k].begin(), p.b[k].end());
    sigma_b[k] = m > 0.0 ? 1.0 / m : 0.0;
  }

  std::vector<cplx> y(p.n);
  std::vector<std::vector<cplx>> z(nk, std::vector<cplx>(na));
  std::vector<cplx> g_bar = g;
  std::vector<cplx> best = g;
  best_cost = p.cost(g);
  double checkpoint_cost = best_cost;  // iterate cost at the last checkpoint

  for (int it = 1; it <= opt.max_iterations; ++it) {
    const auto ag = p.apply_a(g_bar);
    for (std::size_t j = 0; j < p.n; ++j) {
      y[j] += sigma_a * ag[j];
      const double r = std::abs(y[j]);
      if (r > 1.0) y[j] /= r;
    }
    for (std::size_t k = 0; k < nk; ++k) {
      if (sigma_b[k] == 0.0) continue;
      for (std::size_t a = 0; a < na; ++a)
        z[k][a] += sigma_b[k] * p.b[k][a] * (p.f[a] - g_bar[a]);
      project_unit_ball(z[k]);
    }
    const auto aty = p.apply_a_adjoint(y);
    for (std::size_t a = 0; a < na; ++a) {
      cplx grad = aty[a];
      for (std::size_t k = 0; k < nk; ++k) grad -= p.b[k][a] * z[k][a];
      const cplx next = g[a] - tau[a] * grad;
      g_bar[a] = 2.0 * next - g[a];
      g[a] = next;
    }
    const double c = p.cost(g);
    if (c < best_cost) {
      best_cost = c;
      best = g;
    }
    // The iterate leaves the starting split before it improves on it, so stop
    // only once the iterate itself has settled next to the best value.
    if (it % opt.checkpoint == 0) {
      const double slack = opt.tolerance * best_cost;
      if (std::abs(c - checkpoint_cost) <= slack && c <= best_cost + slack) break;
      checkpoint_cost = c;
    }
  }
  return best;
}

}  // namespace

double b0_split_cost(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid, g.grid);
  const Grid& grid = f.grid;
  const double dx = grid.dx();
  const double dxi = grid.dxi();
  const auto x_side = to_physical_complex(g);
  double cost = 0.0;
  for (const auto& v : x_side) cost += dx * std::abs(v);
  const int fl = xi_floor(grid);
  for (int k = fl; k <= 1; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double w = dy::chi_truncated(k, fl, grid.wavenumber(i));
      s += w * w * std::norm(dx * (f.coeffs[i] - g.coeffs[i]));
    }
    cost += std::exp2(-0.5 * k) * std::sqrt(s * dxi);
  }
  return cost;
}

NormBreakdown b0_norm(const SpectralField& f, const B0Options& opt) {
  const Grid& grid = f.grid;
  require_support(SpectralView{f}, [](double xi) { return std::abs(xi) <= 2.0; },
                  "B0 data must live in |xi| <= 2");
  NormBreakdown out;
  out.split_g = SpectralField::zeros(grid);
  double peak = 0.0;
  for (const auto& c : f.coeffs) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) {
    out.blocks.push_back({"L1", 1.0, 0.0});
    return out;
  }
  // Unit peak keeps the iteration equivariant under f -> c f up to rounding.
  const double scale = 1.0 / peak;

  B0Problem p;
  p.n = grid.size();
  p.dx = grid.dx();
  p.floor = xi_floor(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid.wavenumber(i)) <= 2.0) p.active.push_back(i);
  for (auto i : p.active) p.f.push_back(scale * f.coeffs[i]);
  const double root_dxi = std::sqrt(grid.dxi());
  for (int k = p.floor; k <= 1; ++k) {
    std::vector<double> d(p.active.size());
    for (std::size_t a = 0; a < p.active.size(); ++a)
      d[a] = std::exp2(-0.5 * k) * dy::chi_truncated(k, p.floor, grid.wavenumber(p.active[a])) *
             p.dx * root_dxi;
    p.b.push_back(std::move(d));
  }

  std::vector<std::vector<cplx>> starts{p.f, std::vector<cplx>(p.active.size())};
  for (const auto& g0 : opt.initial_g) {
    require_same_grid(g0.grid, grid);
    std::vector<cplx> s(p.active.size());
    for (std::size_t a = 0; a < p.active.size(); ++a) s[a] = scale * g0.coeffs[p.active[a]];
    starts.push_back(std::move(s));
  }
  std::size_t pick = 0;
  double pick_cost = p.cost(starts[0]);
  for (std::size_t s = 1; s < starts.size(); ++s) {
    const double c = p.cost(starts[s]);
    if (c < pick_cost) {
      pick_cost = c;
      pick = s;
    }
  }
  double best_cost = 0.0;
  const auto g = solve_b0(p, starts[pick], opt, best_cost);

  for (std::size_t a = 0; a < p.active.size(); ++a) out.split_g->coeffs[p.active[a]] = g[a] / scale;
  out.blocks.push_back({"L1", 1.0, p.l1_cost(g) / scale});
  double total = out.blocks.back().contribution;
  for (std::size_t k = 0; k < p.b.size(); ++k) {
    const int kk = p.floor + static_cast<int>(k);
    const double c = p.block_cost(k, g) / scale;
    out.blocks.push_back({block_name("k'=", kk), std::exp2(-0.5 * kk), c});
    total += c;
  }
  out.total = total;
  return out;
}

NormBreakdown refined_sobolev_norm(const SpectralField& phi_hat, double sigma,
                                   const B0Options& opt) {
  if (!(sigma >= 0.0)) throw ConfigError("sobolev index must be nonnegative");
  const Grid& grid = phi_hat.grid;
  SpectralField low = phi_hat;
  for (std::size_t i = 0; i < grid.size(); ++i) low.coeffs[i] *= dy::eta0(grid.wavenumber(i));
  NormBreakdown b0 = b0_norm(low, opt);

  NormBreakdown out;
  out.split_g = b0.split_g;
  out.blocks.push_back({"B0", 1.0, b0.total});
  double sum = b0.total * b0.total;
  const double dx = grid.dx();
  for (int k = 1; k <= top_frequency_block(grid); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double w = dy::eta(k, grid.wavenumber(i));
      if (w != 0.0) s += w * w * std::norm(dx * phi_hat.coeffs[i]);
    }
    const double weight = std::exp2(sigma * k);
    const double c = weight * std::sqrt(s * grid.dxi());
    out.blocks.push_back({block_name("k=", k), weight, c});
    sum += c * c;
  }
  out.total = std::sqrt(sum);
  return out;
}

// ---- space-time norms -------------------------------------------------------

namespace {

int modulation_top(const TimeAxis& t) { return std::max(t.top_block(), 1); }

int tau_floor(const TimeAxis& t) { return std::min(t.homogeneous_floor(), 0); }

// Inhomogeneous modulation blocks touching |nu|, within [0, top].
template <class Add>
void modulation_blocks(double nu, int top, Add&& add) {
  const double a = std::abs(nu);
  const int jc = a < 1.0 ? 0 : static_cast<int>(std::floor(std::log2(a)));
  int lo = std::max(0, jc - 1);
  int hi = std::min(top, jc + 1);
  if (lo > hi) lo = hi = top;
  for (int j = lo; j <= hi; ++j) add(j, dy::eta_capped(j, top, nu));
}

double block_l2(double energy, const SpaceTimeSpectral& f) {
  const double c = f.continuum_scale();
  return std::sqrt(energy * c * c * f.cell_measure());
}

bool in_low_band(double xi) { return std::abs(xi) <= 2.0; }

void require_xk_support(const SpaceTimeSpectral& f, int k) {
  if (k == 0)
    require_support(SpaceTimeView{f}, [](double xi, double) { return in_low_band(xi); },
                    "X_0 data must live in |xi| <= 2");
  else
    require_support(SpaceTimeView{f}, [k](double xi, double) { return dy::in_band(k, xi); },
                    "X_k data must live in I_k");
}

NormBreakdown xk_unchecked(const SpaceTimeSpectral& f, int k) {
  NormBreakdown out;
  const int top = modulation_top(f.time);
  if (k >= 1) {
    const auto e = kernels::block_energy_parallel(
        f, top + 1, [top](double xi, double tau, kernels::CellBlocks& cb) {
          modulation_blocks(tau - dy::omega(xi), top, [&cb](int j, double w) { cb.add(j, w); });
        });
    for (int j = 0; j <= top; ++j) {
      const double weight = std::exp2(0.5 * j) * beta_weight(k, j);
      const double c = weight * block_l2(e[static_cast<std::size_t>(j)], f);
      out.blocks.push_back({block_name("j=", j), weight, c});
      out.total += c;
    }
    return out;
  }
  const int fl = xi_floor(f.grid);
  const int nk = 2 - fl;
  const auto e = kernels::block_energy_parallel(
      f, (top + 1) * nk, [top, fl, nk](double xi, double tau, kernels::CellBlocks& cb) {
        double wx[2] = {0.0, 0.0};
        int kx[2] = {0, 0};
        int count = 0;
        for (int kp = fl; kp <= 1 && count < 2; ++kp) {
          const double w = dy::chi_truncated(kp, fl, xi);
          if (w != 0.0) {
            wx[count] = w;
            kx[count++] = kp - fl;
          }
        }
        modulation_blocks(tau, top, [&](int j, double w) {
          for (int c = 0; c < count; ++c) cb.add(j * nk + kx[c], w * wx[c]);
        });
      });
  for (int j = 0; j <= top; ++j) {
    for (int kp = fl; kp <= 1; ++kp) {
      const double weight = std::exp2(j - 0.5 * kp);
      const double c = weight * block_l2(e[static_cast<std::size_t>(j * nk + kp - fl)], f);
      out.blocks.push_back({block_name2("j=", j, ",k'=", kp), weight, c});
      out.total += c;
    }
  }
  return out;
}

double yk_unchecked(const SpaceTimeSpectral& f, int k) {
  return std::exp2(-0.5 * k) *
         kernels::l1x_l2t_parallel(f, [](double xi, double tau) {
           return cplx(tau - dy::omega(xi), 1.0);
         });
}

double y0_unchecked(const SpaceTimeSpectral& f) {
  const int top = modulation_top(f.time);
  const int fl = tau_floor(f.time);
  double s = 0.0;
  for (int j = 1; j <= top; ++j)
    s += std::exp2(j) * kernels::l1x_l2t_parallel(f, [j, top](double, double tau) {
           return cplx(dy::eta_capped(j, top, tau), 0.0);
         });
  for (int j = fl; j <= 0; ++j)
    s += kernels::l1x_l2t_parallel(f, [j, fl](double, double tau) {
      return cplx(dy::chi_truncated(j, fl, tau), 0.0);
    });
  return s;
}

}  // namespace

NormBreakdown xk_norm(const SpaceTimeSpectral& f, int k) {
  if (k < 0) throw ConfigError("frequency block index must be nonnegative");
  require_xk_support(f, k);
  return xk_unchecked(f, k);
}

double yk_norm(const SpaceTimeSpectral& f, int k) {
  if (k < 1) throw ConfigError("Y_k needs k >= 1; use y0_norm for k = 0");
  const double reach = std::ldexp(1.0, k);
  require_support(SpaceTimeView{f},
                  [k, reach](double xi, double tau) {
                    return dy::in_band(k, xi) && std::abs(tau - dy::omega(xi)) <= reach;
                  },
                  "Y_k data must live in modulation below 2^k");
  return yk_unchecked(f, k);
}

double y0_norm(const SpaceTimeSpectral& f) {
  require_support(SpaceTimeView{f}, [](double xi, double) { return in_low_band(xi); },
                  "Y_0 data must live in |xi| <= 2");
  return y0_unchecked(f);
}

double zbar0_norm(const SpaceTimeSpectral& f) {
  require_support(SpaceTimeView{f}, [](double xi, double) { return in_low_band(xi); },
                  "Z-bar_0 data must live in |xi| <= 2");
  const int top = modulation_top(f.time);
  const auto e = kernels::block_energy_parallel(
      f, top + 1, [top](double, double tau, kernels::CellBlocks& cb) {
        modulation_blocks(tau, top, [&cb](int j, double w) { cb.add(j, w); });
      });
  double s = 0.0;
  for (int j = 0; j <= top; ++j) s += std::exp2(j) * block_l2(e[static_cast<std::size_t>(j)], f);
  return s;
}

NormBreakdown zk_norm(const SpaceTimeSpectral& f, int k, const ZOptions& opt) {
  if (k < 0) throw ConfigError("frequency block index must be nonnegative");
  require_xk_support(f, k);
  NormBreakdown best = xk_unchecked(f, k);
  best.threshold = 0;
  const bool with_y = k == 0 || k >= opt.k_y;
  if (!with_y) return best;

  auto y_cost = [k](const SpaceTimeSpectral& fy) {
    return k == 0 ? y0_unchecked(fy) : yk_unchecked(fy, k);
  };
  auto consider = [&](const SpaceTimeSpectral& fy, int threshold) {
    NormBreakdown x = xk_unchecked(f - fy, k);
    const double y = y_cost(fy);
    if (x.total + y < best.total) {
      x.blocks.push_back({"Y", 1.0, y});
      x.total += y;
      x.split_y = fy;
      x.threshold = threshold;
      best = std::move(x);
    }
  };

  const int top = modulation_top(f.time);
  const int last = k == 0 ? top + 1 : k;
  for (int js = 1; js <= last; ++js) {
    if (k == 0 && js == top + 1) {
      consider(f, js);
      continue;
    }
    const double reach = std::ldexp(1.0, js - 1);
    SpaceTimeSpectral fy = f;
    for (std::size_t i = 0; i < f.n_space(); ++i) {
      const double xi = f.grid.wavenumber(i);
      const double shift = k == 0 ? 0.0 : dy::omega(xi);
      for (std::size_t n = 0; n < f.n_time(); ++n)
        fy.at(i, n) *= dy::eta0((f.time.tau(n) - shift) / reach);
    }
    consider(fy, js);
  }
  for (const auto& fy : opt.extra_y) {
    if (k == 0) {
      require_support(SpaceTimeView{fy}, [](double xi, double) { return in_low_band(xi); },
                      "Y_0 candidate must live in |xi| <= 2");
    } else {
      const double reach = std::ldexp(1.0, k);
      require_support(SpaceTimeView{fy},
                      [k, reach](double xi, double tau) {
                        return dy::in_band(k, xi) && std::abs(tau - dy::omega(xi)) <= reach;
                      },
                      "Y_k candidate must live in modulation below 2^k");
    }
    consider(fy, -1);
  }
  return best;
}

namespace {

NormBreakdown composite(const SpaceTimeSpectral& f, double sigma, bool divide_by_a,
                        const ZOptions& opt) {
  if (!(sigma >= 0.0)) throw ConfigError("sobolev index must be nonnegative");
  NormBreakdown out;
  double sum = 0.0;
  for (int k = 0; k <= top_frequency_block(f.grid); ++k) {
    SpaceTimeSpectral fk = f;
    bool any = false;
    for (std::size_t i = 0; i < f.n_space(); ++i) {
      const double xi = f.grid.wavenumber(i);
      const double w = dy::eta(k, xi);
      for (std::size_t n = 0; n < f.n_time(); ++n) {
        cplx v = w == 0.0 ? cplx{} : w * f.at(i, n);
        if (divide_by_a && v != cplx{}) {
          const double tau = f.time.tau(n);
          v /= cplx(k >= 1 ? tau - dy::omega(xi) : tau, 1.0);
        }
        fk.at(i, n) = v;
        any = any || v != cplx{};
      }
    }
    const double weight = std::exp2(sigma * k);
    const double z = any ? zk_norm(fk, k, opt).total : 0.0;
    out.blocks.push_back({block_name("k=", k), weight, weight * z});
    sum += weight * weight * z * z;
  }
  out.total = std::sqrt(sum);
  return out;
}

}  // namespace

NormBreakdown fsigma_norm_spectral(const SpaceTimeSpectral& f, double sigma, const ZOptions& opt) {
  return composite(f, sigma, false, opt);
}

NormBreakdown nsigma_norm_spectral(const SpaceTimeSpectral& f, double sigma, const ZOptions& opt) {
  return composite(f, sigma, true, opt);
}

NormBreakdown fsigma_norm(const SpaceTimeField& u, double sigma, const ZOptions& opt) {
  SpaceTimeField w = u;
  for (std::size_t j = 0; j < u.grid.size(); ++j)
    for (std::size_t n = 0; n < u.time.n_time; ++n) {
      const double t = u.time.t(n);
      w.at(j, n) *= 1.0 + t * t;
    }
  return fsigma_norm_spectral(to_spacetime_spectral(w), sigma, opt);
}

NormBreakdown nsigma_norm(const SpaceTimeField& u, double sigma, const ZOptions& opt) {
  return nsigma_norm_spectral(to_spacetime_spectral(u), sigma, opt);
}

}  // namespace bob
