#pragma once

// Headline experiments: inviscid limit, Lipschitz probe, scaling of the
// refined norm, Picard convergence and energy bookkeeping.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bob/evolution.hpp"
#include "bob/fit.hpp"
#include "bob/grid.hpp"

namespace bob {

struct SweepRecord {
  double param = 0.0;
  double measurement = 0.0;
  double aux = 0.0;
};

struct SweepResult {
  std::string experiment_id;
  std::vector<SweepRecord> records;
  std::optional<LinearFit> fit;  // log-log, only with >= 4 positive points
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> notes;

  // Fits log(measurement) against log(param) when possible.
  void refit();
  double extra(const std::string& key) const;  // ConfigError if absent
  void write_csv(std::ostream& os) const;
  // key=value lines prefixed with "result.".
  void write_summary(std::ostream& os) const;
};

// a e^{-x^2 / w^2} with a chosen so the refined H0 norm equals delta / 2.
PhysicalField default_data(const Grid& g, double delta, double width = 2.0);

struct SweepOptions {
  double horizon = 1.0;
  double dt = 1.0 / 512;
  std::size_t snapshots = 64;
  int workers = 0;
};

// sup over snapshots of ||S_eps(phi) - S_0(phi)||_{H~sigma} per eps; aux is
// that difference divided by eps ||phi||_{H~2}. Records follow the order of `epsilons`,
// which must be strictly monotone.
SweepResult inviscid_sweep(const PhysicalField& phi, double sigma,
                           const std::vector<double>& epsilons, const SweepOptions& opt = {});

struct LipschitzRecord {
  double epsilon = 0.0;
  double numerator = 0.0;    // sup_t ||S(phi) - S(phi')||
  double denominator = 0.0;  // ||phi - phi'||
  double ratio = 0.0;
};
// DomainError when phi' == phi.
LipschitzRecord lipschitz_probe(const PhysicalField& phi, const PhysicalField& phi2, double sigma,
                                double epsilon, const SweepOptions& opt = {});

// phi_lambda(x) = lambda phi(lambda x) sampled on g; measurement is the ratio of
// refined norms to lambda = 1, aux the ratio of the B0 parts.
// ConfigError when phi_lambda is not resolved by g.
SweepResult scaling_check(const std::function<double(double)>& phi, const Grid& g, double sigma,
                          const std::vector<double>& lambdas);

struct PicardOptions {
  double horizon = 1.0;
  std::size_t nodes = 128;
  std::size_t h0_stride = 4;         // H~0 differences on every stride-th node
  double etd_dt = 1.0 / 1024;        // reference solve; <= 0 skips the comparison
  double roundoff_floor = 1e-13;     // relative to sup ||u_0||
};
// Records: param n, measurement sup_t ||u_n - u_{n-1}||_{L2}, aux the H~0 version.
// Extras: max_ratio, etd_gap, diverged.
SweepResult picard_report(const PhysicalField& phi, double epsilon, int iterations,
                          const PicardOptions& opt = {});

// Records: param t, measurement ||u||^2, aux the dissipation residual
// d/dt ||u||^2 + 2 eps ||u_x||^2 (Simpson over neighbouring snapshot pairs).
// Extras: max_abs_residual, max_relative_drift.
SweepResult energy_report(const Trajectory& traj);

}  // namespace bob
