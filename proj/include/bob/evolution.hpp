#pragma once

// Benjamin-Ono-Burgers dynamics u_t - eps u_xx + H u_xx + u u_x = 0 on the
// periodic grid. In Fourier variables u_hat' = lambda(xi) u_hat - (i xi / 2) (u^2)^,
// lambda = i omega(xi) - eps xi^2, omega(xi) = -xi |xi|.

#include <iosfwd>
#include <string>
#include <vector>

#include "bob/grid.hpp"

namespace bob {

struct DispersionParams {
  double epsilon = 0.0;
  cplx lambda(double xi) const;
};

// Multiplies by exp(t lambda(xi)); DomainError for t < 0 when eps > 0.
SpectralField apply_semigroup(const SpectralField& phi_hat, double t, double epsilon);
// exp(i t omega(xi) - |t| eps xi^2): the even-in-time extension used to place
// free solutions on a symmetric time window.
SpectralField apply_semigroup_even(const SpectralField& phi_hat, double t, double epsilon);

// d/dx (u^2 / 2) with the 2/3 rule: u is truncated to |m| <= N/3 before the
// product and the product is truncated again.
PhysicalField nonlinear_term(const PhysicalField& u);
SpectralField nonlinear_term(const SpectralField& u_hat);

struct Trajectory {
  Grid grid;
  double epsilon = 0.0;
  double dt = 0.0;
  std::string method;
  bool dealiased = true;
  std::vector<double> times;
  std::vector<PhysicalField> snapshots;

  void write_csv(std::ostream& os) const;
  static Trajectory read_csv(std::istream& is);
};

struct IntegrateOptions {
  std::size_t snapshots = 64;
  bool nonlinear = true;
};

// ETDRK4 on [0, T]; T / snapshots must be a whole number of steps.
// ConfigError on bad parameters, DivergenceError on non-finite or runaway states.
Trajectory integrate(const PhysicalField& phi, double epsilon, double horizon, double dt,
                     const IntegrateOptions& opt = {});

// ETDRK4 coefficients for one step size: e^{Lh}, e^{Lh/2}, Q, f1, f2, f3 by
// contour averaging over 32 points on the unit circle around L h.
struct EtdCoefficients {
  std::vector<cplx> e, e2, q, f1, f2, f3;
};
EtdCoefficients etdrk4_coefficients(const std::vector<cplx>& lambda, double h);

// Picard iterates u_0 = W(t) phi, u_{n+1} = W(t) phi - int_0^t W(t - s) d_x(u_n^2 / 2) ds
// on the nodes t_i = i T / nodes; returns u_0 .. u_{iterations}.
// DivergenceError if an iterate exceeds 10 times the size of u_0.
std::vector<Trajectory> picard_solve(const PhysicalField& phi, double epsilon, double horizon,
                                     int iterations, std::size_t nodes = 128);

// Production solve. For eps = 0 the flow is computed on a grid twice as fine
// with half the step and restricted back to phi's grid.
Trajectory solution_map(const PhysicalField& phi, double epsilon, double horizon, double dt,
                        std::size_t snapshots = 64);

// Largest |omega| on the grid times dt must not exceed this.
inline constexpr double kMaxDispersiveStep = 10.0;

}  // namespace bob
