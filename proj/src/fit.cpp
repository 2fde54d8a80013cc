#include "bob/fit.hpp"

#include <gsl/gsl_fit.h>
#include <gsl/gsl_sort.h>
#include <gsl/gsl_statistics_double.h>

#include <algorithm>
#include <cmath>

#include "bob/errors.hpp"

namespace bob {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("line fit needs matching samples");
  LinearFit f;
  double c00 = 0.0, c01 = 0.0, c11 = 0.0, sumsq = 0.0;
  gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &f.intercept, &f.slope, &c00, &c01, &c11,
                 &sumsq);
  const double mean = gsl_stats_mean(y.data(), 1, y.size());
  double total = 0.0;
  for (double v : y) total += (v - mean) * (v - mean);
  f.r2 = total > 0.0 ? 1.0 - sumsq / total : 1.0;
  return f;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("rank correlation needs matching samples");
  std::vector<double> work(2 * x.size());
  return gsl_stats_spearman(x.data(), 1, y.data(), 1, x.size(), work.data());
}

double median(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median of an empty sample");
  std::sort(v.begin(), v.end());
  return gsl_stats_median_from_sorted_data(v.data(), 1, v.size());
}

}  // namespace bob
